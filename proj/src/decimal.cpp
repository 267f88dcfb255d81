#include "chaseforge/decimal.hpp"

#include <limits>

#include "chaseforge/error.hpp"

namespace chaseforge {

namespace {

using Wide = __int128;

Decimal checked(Wide v, const char* op) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw ArithmeticError(std::string("decimal overflow in ") + op);
  return Decimal::from_units(static_cast<std::int64_t>(v));
}

// Round-half-away-from-zero division of wide integers.
Wide div_round(Wide num, Wide den) {
  bool negative = (num < 0) != (den < 0);
  Wide n = num < 0 ? -num : num;
  Wide d = den < 0 ? -den : den;
  Wide q = n / d;
  if ((n % d) * 2 >= d) ++q;
  return negative ? -q : q;
}

}  // namespace

Decimal Decimal::from_int(std::int64_t v) { return checked(Wide(v) * kOne, "integer conversion"); }

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-') {
    negative = true;
    i = 1;
  }
  Wide whole = 0;
  std::size_t digits = 0;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
    whole = whole * 10 + (text[i] - '0');
    if (whole > Wide(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
  }
  if (digits == 0) return std::nullopt;
  Wide frac = 0;
  int frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      if (++frac_digits > kScale) return std::nullopt;
      frac = frac * 10 + (text[i] - '0');
    }
    if (frac_digits == 0) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;
  for (int k = frac_digits; k < kScale; ++k) frac *= 10;
  Wide units = whole * kOne + frac;
  if (negative) units = -units;
  if (units > std::numeric_limits<std::int64_t>::max() || units < std::numeric_limits<std::int64_t>::min())
    return std::nullopt;
  return from_units(static_cast<std::int64_t>(units));
}

std::string Decimal::to_string() const {
  Wide v = units_;
  bool negative = v < 0;
  if (negative) v = -v;
  auto whole = static_cast<unsigned long long>(v / kOne);
  auto frac = static_cast<unsigned long long>(v % kOne);
  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (frac != 0) {
    std::string f = std::to_string(frac);
    f.insert(0, kScale - f.size(), '0');
    while (f.back() == '0') f.pop_back();
    out += '.';
    out += f;
  }
  return out;
}

Decimal Decimal::operator-() const { return checked(-Wide(units_), "negation"); }

Decimal operator+(Decimal a, Decimal b) { return checked(Wide(a.units_) + b.units_, "addition"); }

Decimal operator-(Decimal a, Decimal b) { return checked(Wide(a.units_) - b.units_, "subtraction"); }

Decimal operator*(Decimal a, Decimal b) {
  return checked(div_round(Wide(a.units_) * b.units_, Decimal::kOne), "multiplication");
}

Decimal operator/(Decimal a, Decimal b) {
  if (b.units_ == 0) throw ArithmeticError("division by zero");
  return checked(div_round(Wide(a.units_) * Decimal::kOne, b.units_), "division");
}

}  // namespace chaseforge
