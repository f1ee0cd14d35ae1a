#include "cframe/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cframe/error.hpp"

namespace cframe::config {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::string& source) : text_(text), doc_(source) {}

  Document run() {
    doc_.touch_section("");
    while (skip_blank_lines()) {
      if (peek() == '[') {
        parse_header();
      } else {
        parse_pair();
      }
    }
    return std::move(doc_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::string section_;
  std::string key_;
  Document doc_;

  [[noreturn]] void error(const std::string& what) const {
    std::string msg = doc_.source() + ":" + std::to_string(line_) + ": " + what;
    if (!key_.empty()) msg += " (key '" + (section_.empty() ? key_ : section_ + "." + key_) + "')";
    fail(ErrorCode::ParseError, msg);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
  }

  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') get();
  }

  // Whitespace, comments and newlines, as allowed inside arrays.
  void skip_any_space() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }

  // Returns false at end of input.
  bool skip_blank_lines() {
    key_.clear();
    skip_any_space();
    return !at_end();
  }

  void expect_line_end() {
    skip_inline_space();
    skip_comment();
    if (!at_end() && peek() != '\n') error(std::string("unexpected character '") + peek() + "'");
  }

  static bool is_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key() {
    std::string key;
    while (!at_end() && is_key_char(peek())) key += get();
    if (key.empty()) error("expected a key");
    return key;
  }

  void parse_header() {
    get();  // [
    skip_inline_space();
    section_ = parse_key();
    skip_inline_space();
    if (peek() != ']') error("expected ']' after section name");
    get();
    if (doc_.has_section(section_) && !section_.empty()) error("duplicate section [" + section_ + "]");
    doc_.touch_section(section_);
    expect_line_end();
  }

  void parse_pair() {
    const int line = line_;
    key_ = parse_key();
    skip_inline_space();
    if (peek() != '=') error("expected '=' after key");
    get();
    skip_inline_space();
    if (at_end() || peek() == '\n' || peek() == '#') error("missing value");
    Value v = parse_value();
    expect_line_end();
    if (doc_.find(section_, key_)) error("duplicate key");
    doc_.insert(section_, key_, Entry{std::move(v), line});
  }

  Value parse_value() {
    const int line = line_;
    const char c = peek();
    if (c == '"') return {parse_string(), line};
    if (c == '[') return {parse_array(), line};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) word += get();
      if (word == "true") return {true, line};
      if (word == "false") return {false, line};
      if (word == "inf") return {HUGE_VAL, line};
      if (word == "nan") error("nan is not an accepted value");
      error("unquoted string '" + word + "'");
    }
    return {parse_number(), line};
  }

  std::string parse_string() {
    get();  // opening quote
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') error("unterminated string");
      char c = get();
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end()) error("unterminated escape");
        c = get();
        switch (c) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: error(std::string("unknown escape \\") + c);
        }
      } else {
        out += c;
      }
    }
  }

  double parse_number() {
    std::string token;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_') {
        if (c != '_') token += c;
        get();
      } else {
        break;
      }
    }
    if (token.empty()) error("expected a value");
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      error("malformed number '" + token + "'");
    }
    if (used != token.size()) error("malformed number '" + token + "'");
    return value;
  }

  Array parse_array() {
    get();  // [
    Array out;
    skip_any_space();
    if (peek() == ']') {
      get();
      return out;
    }
    for (;;) {
      skip_any_space();
      if (at_end()) error("unterminated array");
      out.push_back(parse_value());
      skip_any_space();
      if (at_end()) error("unterminated array");
      const char c = get();
      if (c == ']') return out;
      if (c != ',') error("expected ',' or ']' in array");
      skip_any_space();
      if (peek() == ']') {  // trailing comma
        get();
        return out;
      }
    }
  }
};

}  // namespace

const Entry* Document::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::vector<std::string> Document::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto s = sections_.find(section);
  if (s != sections_.end())
    for (const auto& [k, v] : s->second) out.push_back(k);
  return out;
}

std::vector<std::string> Document::sections() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : sections_) out.push_back(k);
  return out;
}

std::string Document::where(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  const std::string name = section.empty() ? key : section + "." + key;
  return source_ + (e ? ":" + std::to_string(e->line) : std::string()) + ": key '" + name + "'";
}

void Document::insert(const std::string& section, const std::string& key, Entry entry) {
  sections_[section][key] = std::move(entry);
}

double Document::number(const std::string& section, const std::string& key, double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (!e->value.is_number()) fail(ErrorCode::ParseError, where(section, key) + " must be a number");
  return std::get<double>(e->value.data);
}

int Document::integer(const std::string& section, const std::string& key, int fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const double v = number(section, key, 0.0);
  if (v != std::floor(v) || std::abs(v) > 2e9) fail(ErrorCode::ParseError, where(section, key) + " must be an integer");
  return static_cast<int>(v);
}

std::string Document::string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (!e->value.is_string()) fail(ErrorCode::ParseError, where(section, key) + " must be a string");
  return std::get<std::string>(e->value.data);
}

bool Document::boolean(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (!e->value.is_bool()) fail(ErrorCode::ParseError, where(section, key) + " must be true or false");
  return std::get<bool>(e->value.data);
}

std::vector<double> Document::numbers(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return {};
  if (!e->value.is_array()) fail(ErrorCode::ParseError, where(section, key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : std::get<Array>(e->value.data)) {
    if (!v.is_number()) fail(ErrorCode::ParseError, where(section, key) + " must be an array of numbers");
    out.push_back(std::get<double>(v.data));
  }
  return out;
}

std::vector<std::vector<double>> Document::table(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return {};
  const auto bad = [&] { fail(ErrorCode::ParseError, where(section, key) + " must be an array of number arrays"); };
  if (!e->value.is_array()) bad();
  std::vector<std::vector<double>> out;
  for (const auto& row : std::get<Array>(e->value.data)) {
    if (!row.is_array()) bad();
    std::vector<double> r;
    for (const auto& v : std::get<Array>(row.data)) {
      if (!v.is_number()) bad();
      r.push_back(std::get<double>(v.data));
    }
    out.push_back(std::move(r));
  }
  return out;
}

void Document::require_known(const std::string& section, const std::vector<std::string>& allowed) const {
  for (const auto& k : keys(section)) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) fail(ErrorCode::ParseError, where(section, k) + " is not recognised");
  }
}

Document parse(std::string_view text, const std::string& source) {
  return Parser(text, source).run();
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

}  // namespace cframe::config
