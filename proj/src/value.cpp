#include "chaseforge/value.hpp"

namespace chaseforge {

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::String: return "string";
    case Value::Kind::Number: return "number";
    case Value::Kind::Boolean: return "boolean";
    case Value::Kind::Null: return "labeled null";
  }
  return "?";
}

std::string Value::to_source() const {
  switch (kind()) {
    case Kind::String: return quote_string(as_string());
    case Kind::Number: return as_number().to_string();
    case Kind::Boolean: return as_boolean() ? "true" : "false";
    case Kind::Null: return "_:n" + std::to_string(as_null().id);
  }
  return {};
}

std::string Value::to_text() const {
  if (is_string()) return as_string();
  return to_source();
}

std::size_t Value::hash() const noexcept {
  std::size_t h = 0;
  switch (kind()) {
    case Kind::String: h = std::hash<std::string>{}(as_string()); break;
    case Kind::Number: h = std::hash<Decimal>{}(as_number()); break;
    case Kind::Boolean: h = as_boolean() ? 1 : 2; break;
    case Kind::Null: h = std::hash<std::uint64_t>{}(as_null().id); break;
  }
  return h * 31 + data_.index();
}

}  // namespace chaseforge
