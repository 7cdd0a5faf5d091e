#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace exomap {

/// Minimal TOML subset used by the configuration files: bare-key tables
/// ([a.b]), arrays of tables ([[a.b]]), and key = value pairs with strings,
/// booleans, numbers, and (nested, possibly multi-line) arrays. Comments
/// start with '#'. Dates, inline tables, and quoted keys are not supported.
class TomlValue {
 public:
  enum class Kind { kTable, kArray, kString, kNumber, kBool };

  TomlValue() : kind_(Kind::kTable) {}

  static TomlValue parse(const std::string& text, const std::string& origin = "<string>");
  static TomlValue parseFile(const std::string& path);

  Kind kind() const { return kind_; }
  bool isTable() const { return kind_ == Kind::kTable; }
  bool isArray() const { return kind_ == Kind::kArray; }

  bool contains(const std::string& key) const;
  const TomlValue& at(const std::string& key) const;  // throws ConfigError

  double asNumber() const;
  bool asBool() const;
  const std::string& asString() const;
  const std::vector<TomlValue>& asArray() const;

  // Typed lookups with defaults.
  double numberOr(const std::string& key, double fallback) const;
  int intOr(const std::string& key, int fallback) const;
  bool boolOr(const std::string& key, bool fallback) const;
  std::string stringOr(const std::string& key, const std::string& fallback) const;

  /// Array of n numbers, e.g. a 2D point.
  std::vector<double> numbers(const std::string& key) const;

  const std::map<std::string, TomlValue>& table() const;

 private:
  friend class TomlParser;

  Kind kind_;
  std::map<std::string, TomlValue> table_;
  std::vector<TomlValue> array_;
  std::string string_;
  double number_ = 0.0;
  bool bool_ = false;
};

}  // namespace exomap
