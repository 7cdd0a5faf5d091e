#include "exomap/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

std::string stripComment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> splitPath(const std::string& path, const std::string& origin) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    part = trim(part);
    if (part.empty()) throw ConfigError(origin + ": empty table path component in '" + path + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw ConfigError(origin + ": empty table path");
  return parts;
}

int bracketBalance(const std::string& s) {
  int balance = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (in_string) continue;
    if (s[i] == '[') ++balance;
    if (s[i] == ']') --balance;
  }
  return balance;
}

}  // namespace

class TomlParser {
 public:
  TomlParser(const std::string& text, const std::string& origin) : origin_(origin) {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines_.push_back(stripComment(line));
  }

  TomlValue run() {
    TomlValue root;
    TomlValue* current = &root;

    for (std::size_t i = 0; i < lines_.size(); ++i) {
      std::string line = trim(lines_[i]);
      if (line.empty()) continue;

      if (line.size() >= 4 && line.rfind("[[", 0) == 0 && line.substr(line.size() - 2) == "]]") {
        const auto parts = splitPath(line.substr(2, line.size() - 4), origin_);
        TomlValue* parent = navigate(root, parts, /*drop_last=*/true);
        TomlValue& slot = parent->table_[parts.back()];
        if (slot.kind_ == TomlValue::Kind::kTable && slot.table_.empty() && slot.array_.empty()) {
          slot.kind_ = TomlValue::Kind::kArray;
        }
        if (slot.kind_ != TomlValue::Kind::kArray) {
          throw ConfigError(origin_ + ": '" + parts.back() + "' is not an array of tables");
        }
        slot.array_.emplace_back();
        current = &slot.array_.back();
        continue;
      }

      if (line.front() == '[' && line.back() == ']') {
        const auto parts = splitPath(line.substr(1, line.size() - 2), origin_);
        current = navigate(root, parts, /*drop_last=*/false);
        continue;
      }

      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(origin_ + ": expected 'key = value', got '" + line + "'");
      }
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw ConfigError(origin_ + ": empty key");
      std::string value = trim(line.substr(eq + 1));
      // Multi-line arrays: accumulate until brackets balance.
      while (bracketBalance(value) > 0 && i + 1 < lines_.size()) {
        value += " " + trim(lines_[++i]);
      }
      if (current->table_.count(key)) {
        throw ConfigError(origin_ + ": duplicate key '" + key + "'");
      }
      std::size_t pos = 0;
      current->table_[key] = parseValue(value, pos);
      if (trim(value.substr(pos)).size() > 0) {
        throw ConfigError(origin_ + ": trailing characters after value for '" + key + "'");
      }
    }
    return root;
  }

 private:
  TomlValue* navigate(TomlValue& root, const std::vector<std::string>& parts, bool drop_last) {
    TomlValue* node = &root;
    const std::size_t end = parts.size() - (drop_last ? 1 : 0);
    for (std::size_t i = 0; i < end; ++i) {
      TomlValue& next = node->table_[parts[i]];
      if (next.kind_ == TomlValue::Kind::kArray) {
        // Path through an array of tables targets its latest element.
        if (next.array_.empty()) next.array_.emplace_back();
        node = &next.array_.back();
      } else if (next.kind_ == TomlValue::Kind::kTable) {
        node = &next;
      } else {
        throw ConfigError(origin_ + ": '" + parts[i] + "' is not a table");
      }
    }
    return node;
  }

  TomlValue parseValue(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) throw ConfigError(origin_ + ": missing value");

    TomlValue v;
    if (s[pos] == '"') {
      v.kind_ = TomlValue::Kind::kString;
      ++pos;
      std::string out;
      while (pos < s.size() && s[pos] != '"') {
        if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
        out += s[pos++];
      }
      if (pos >= s.size()) throw ConfigError(origin_ + ": unterminated string");
      ++pos;  // closing quote
      v.string_ = out;
      return v;
    }
    if (s[pos] == '[') {
      v.kind_ = TomlValue::Kind::kArray;
      ++pos;
      while (true) {
        while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ',')) {
          ++pos;
        }
        if (pos >= s.size()) throw ConfigError(origin_ + ": unterminated array");
        if (s[pos] == ']') {
          ++pos;
          return v;
        }
        v.array_.push_back(parseValue(s, pos));
      }
    }
    if (s.compare(pos, 4, "true") == 0) {
      v.kind_ = TomlValue::Kind::kBool;
      v.bool_ = true;
      pos += 4;
      return v;
    }
    if (s.compare(pos, 5, "false") == 0) {
      v.kind_ = TomlValue::Kind::kBool;
      v.bool_ = false;
      pos += 5;
      return v;
    }
    // Number.
    const char* start = s.c_str() + pos;
    char* end = nullptr;
    const double value = std::strtod(start, &end);
    if (end == start) throw ConfigError(origin_ + ": cannot parse value at '" + s.substr(pos) + "'");
    pos += static_cast<std::size_t>(end - start);
    v.kind_ = TomlValue::Kind::kNumber;
    v.number_ = value;
    return v;
  }

  std::string origin_;
  std::vector<std::string> lines_;
};

TomlValue TomlValue::parse(const std::string& text, const std::string& origin) {
  return TomlParser(text, origin).run();
}

TomlValue TomlValue::parseFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse(buffer.str(), path);
}

bool TomlValue::contains(const std::string& key) const {
  return kind_ == Kind::kTable && table_.count(key) > 0;
}

const TomlValue& TomlValue::at(const std::string& key) const {
  if (kind_ != Kind::kTable) throw ConfigError("value is not a table (looking up '" + key + "')");
  const auto it = table_.find(key);
  if (it == table_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double TomlValue::asNumber() const {
  if (kind_ != Kind::kNumber) throw ConfigError("config value is not a number");
  return number_;
}

bool TomlValue::asBool() const {
  if (kind_ != Kind::kBool) throw ConfigError("config value is not a boolean");
  return bool_;
}

const std::string& TomlValue::asString() const {
  if (kind_ != Kind::kString) throw ConfigError("config value is not a string");
  return string_;
}

const std::vector<TomlValue>& TomlValue::asArray() const {
  if (kind_ != Kind::kArray) throw ConfigError("config value is not an array");
  return array_;
}

double TomlValue::numberOr(const std::string& key, double fallback) const {
  return contains(key) ? at(key).asNumber() : fallback;
}

int TomlValue::intOr(const std::string& key, int fallback) const {
  return contains(key) ? static_cast<int>(at(key).asNumber()) : fallback;
}

bool TomlValue::boolOr(const std::string& key, bool fallback) const {
  return contains(key) ? at(key).asBool() : fallback;
}

std::string TomlValue::stringOr(const std::string& key, const std::string& fallback) const {
  return contains(key) ? at(key).asString() : fallback;
}

std::vector<double> TomlValue::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& v : at(key).asArray()) out.push_back(v.asNumber());
  return out;
}

const std::map<std::string, TomlValue>& TomlValue::table() const {
  if (kind_ != Kind::kTable) throw ConfigError("config value is not a table");
  return table_;
}

}  // namespace exomap
