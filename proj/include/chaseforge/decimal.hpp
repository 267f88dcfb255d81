#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace chaseforge {

/// Exact signed fixed-point number with six fractional digits.
///
/// Values are stored as an integer count of micro-units, so 0.3 * 124 is
/// exactly 37.2. Multiplication and division round half away from zero at the
/// sixth digit. Every operation that leaves the int64 range throws
/// ArithmeticError.
class Decimal {
 public:
  static constexpr int kScale = 6;
  static constexpr std::int64_t kOne = 1'000'000;

  constexpr Decimal() = default;

  static constexpr Decimal from_units(std::int64_t units) {
    Decimal d;
    d.units_ = units;
    return d;
  }
  static Decimal from_int(std::int64_t v);

  /// Parses `-?digits(.digits)?` with at most six fractional digits.
  static std::optional<Decimal> parse(std::string_view text);

  std::int64_t units() const noexcept { return units_; }
  bool is_integer() const noexcept { return units_ % kOne == 0; }
  bool is_zero() const noexcept { return units_ == 0; }

  /// Minimal representation: "37.2", "62", "-0.5".
  std::string to_string() const;

  Decimal operator-() const;
  friend Decimal operator+(Decimal a, Decimal b);
  friend Decimal operator-(Decimal a, Decimal b);
  friend Decimal operator*(Decimal a, Decimal b);
  friend Decimal operator/(Decimal a, Decimal b);

  friend constexpr bool operator==(Decimal a, Decimal b) = default;
  friend constexpr auto operator<=>(Decimal a, Decimal b) = default;

 private:
  std::int64_t units_ = 0;
};

}  // namespace chaseforge

template <>
struct std::hash<chaseforge::Decimal> {
  std::size_t operator()(chaseforge::Decimal d) const noexcept {
    return std::hash<std::int64_t>{}(d.units());
  }
};
