#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "chaseforge/decimal.hpp"

namespace chaseforge {

/// Placeholder invented for an existential head variable. Ids are assigned
/// from 1 upward within one reasoning session.
struct LabeledNull {
  std::uint64_t id = 0;
  friend constexpr auto operator<=>(const LabeledNull&, const LabeledNull&) = default;
};

/// A ground value: string, number, boolean or labeled null.
///
/// Integers and decimals share the exact fixed-point representation, so the
/// integer 62 and the product 0.5 * 124 are the same value.
class Value {
 public:
  enum class Kind { String, Number, Boolean, Null };

  Value() : data_(Decimal{}) {}
  static Value string(std::string s) { return Value(Data(std::move(s))); }
  static Value number(Decimal d) { return Value(Data(d)); }
  static Value integer(std::int64_t v) { return Value(Data(Decimal::from_int(v))); }
  static Value boolean(bool b) { return Value(Data(b)); }
  static Value null(std::uint64_t id) { return Value(Data(LabeledNull{id})); }

  Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
  bool is_string() const noexcept { return kind() == Kind::String; }
  bool is_number() const noexcept { return kind() == Kind::Number; }
  bool is_boolean() const noexcept { return kind() == Kind::Boolean; }
  bool is_null() const noexcept { return kind() == Kind::Null; }

  const std::string& as_string() const { return std::get<std::string>(data_); }
  Decimal as_number() const { return std::get<Decimal>(data_); }
  bool as_boolean() const { return std::get<bool>(data_); }
  LabeledNull as_null() const { return std::get<LabeledNull>(data_); }

  /// Source syntax: strings double-quoted and escaped, nulls as `_:n<id>`.
  std::string to_source() const;
  /// Text form used in sentences: strings unquoted, minimal decimals.
  std::string to_text() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    return a.data_ <=> b.data_;
  }

  std::size_t hash() const noexcept;

 private:
  using Data = std::variant<std::string, Decimal, bool, LabeledNull>;
  explicit Value(Data d) : data_(std::move(d)) {}
  Data data_;
};

const char* kind_name(Value::Kind k);

std::string quote_string(const std::string& s);

}  // namespace chaseforge

template <>
struct std::hash<chaseforge::Value> {
  std::size_t operator()(const chaseforge::Value& v) const noexcept { return v.hash(); }
};
