#pragma once

// Reader for the scenario file format: a TOML subset with [sections],
// `key = value` pairs, '#' comments, and values that are numbers, "strings",
// booleans or (nested, possibly multi-line) arrays.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cframe::config {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<double, std::string, bool, Array> data;
  int line = 0;

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
};

struct Entry {
  Value value;
  int line = 0;
};

class Document {
 public:
  explicit Document(std::string source) : source_(std::move(source)) {}

  const std::string& source() const noexcept { return source_; }
  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
  const Entry* find(const std::string& section, const std::string& key) const;
  std::vector<std::string> keys(const std::string& section) const;
  std::vector<std::string> sections() const;

  // Typed getters throw ParseError naming file, line and key on a type
  // mismatch. The `section.key` form is used in messages.
  double number(const std::string& section, const std::string& key, double fallback) const;
  int integer(const std::string& section, const std::string& key, int fallback) const;
  std::string string(const std::string& section, const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  std::vector<std::vector<double>> table(const std::string& section, const std::string& key) const;

  // Throws ParseError for any key not listed in `allowed`.
  void require_known(const std::string& section, const std::vector<std::string>& allowed) const;

  std::string where(const std::string& section, const std::string& key) const;

  void insert(const std::string& section, const std::string& key, Entry entry);
  void touch_section(const std::string& section) { sections_[section]; }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

Document parse(std::string_view text, const std::string& source = "<string>");
Document parse_file(const std::string& path);

}  // namespace cframe::config
