#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pgt {

/// UTC instant with microsecond resolution.
struct DateTime {
  std::int64_t micros = 0;  // since 1970-01-01T00:00:00Z

  auto operator<=>(const DateTime&) const = default;
};

/// Formats as RFC 3339 in UTC, e.g. "2021-05-31T12:00:00Z". Fractional
/// seconds are printed only when non-zero.
std::string format_rfc3339(DateTime t);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.ffffff](Z|+HH:MM|-HH:MM)".
std::optional<DateTime> parse_rfc3339(std::string_view text);

using TextList = std::vector<std::string>;

/// A stored property value. Lists hold text only.
class Value {
 public:
  using Storage = std::variant<std::monostate, std::string, std::int64_t, double,
                               bool, DateTime, TextList>;

  Value() = default;
  Value(std::string v) : v_(std::move(v)) {}
  Value(const char* v) : v_(std::string(v)) {}
  Value(std::int64_t v) : v_(v) {}
  Value(int v) : v_(static_cast<std::int64_t>(v)) {}
  Value(double v) : v_(v) {}
  Value(bool v) : v_(v) {}
  Value(DateTime v) : v_(v) {}
  Value(TextList v) : v_(std::move(v)) {}

  static Value null() { return {}; }

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_datetime() const { return std::holds_alternative<DateTime>(v_); }
  bool is_list() const { return std::holds_alternative<TextList>(v_); }

  const std::string& text() const { return std::get<std::string>(v_); }
  std::int64_t integer() const { return std::get<std::int64_t>(v_); }
  double floating() const { return std::get<double>(v_); }
  bool boolean() const { return std::get<bool>(v_); }
  DateTime datetime() const { return std::get<DateTime>(v_); }
  const TextList& list() const { return std::get<TextList>(v_); }

  const Storage& storage() const { return v_; }

  /// Cypher-style literal rendering ('text', 12, 1.5, true, datetime(...), [...]).
  std::string to_literal() const;

  bool operator==(const Value&) const = default;

 private:
  Storage v_;
};

}  // namespace pgt
