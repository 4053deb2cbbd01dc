#include "rpcoh/config.hpp"

#include "rpcoh/errors.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <string_view>

namespace rpcoh {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view text, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    fail(line, "malformed number '" + std::string(text) + "'");
  }
  return v;
}

// Removes a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

ConfigValue parse_value(std::string_view text, std::size_t line) {
  text = trim(text);
  if (text.empty()) fail(line, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(line, "unterminated string");
    const std::string_view body = text.substr(1, text.size() - 2);
    if (body.find('"') != std::string_view::npos || body.find('\\') != std::string_view::npos) {
      fail(line, "escapes and embedded quotes are not supported");
    }
    return std::string(body);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '[') {
    if (text.back() != ']') fail(line, "unterminated array");
    std::vector<double> items;
    std::string_view body = trim(text.substr(1, text.size() - 2));
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      const std::string_view item = trim(body.substr(0, comma));
      if (item.empty()) {
        if (comma == std::string_view::npos) break;  // trailing comma
        fail(line, "empty array element");
      }
      items.push_back(parse_number(item, line));
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return items;
  }
  return parse_number(text, line);
}

const char* type_name(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return "number";
    case 1: return "string";
    case 2: return "boolean";
    default: return "array";
  }
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile cfg;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') fail(line, "tables are not supported; the config is flat");
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
    const std::string key(trim(text.substr(0, eq)));
    if (key.empty()) fail(line, "missing key");
    for (char c : key) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') fail(line, "invalid key '" + key + "'");
    }
    if (cfg.contains(key)) fail(line, "duplicate key '" + key + "'");
    cfg.values_[key] = parse_value(text.substr(eq + 1), line);
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

const ConfigValue& ConfigFile::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double ConfigFile::number(const std::string& key) const {
  const ConfigValue& v = at(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ConfigError("config key '" + key + "' must be a number, got " + type_name(v));
}

std::string ConfigFile::string(const std::string& key) const {
  const ConfigValue& v = at(key);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("config key '" + key + "' must be a string, got " + type_name(v));
}

bool ConfigFile::boolean(const std::string& key) const {
  const ConfigValue& v = at(key);
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("config key '" + key + "' must be true or false, got " + type_name(v));
}

std::vector<double> ConfigFile::numbers(const std::string& key) const {
  const ConfigValue& v = at(key);
  if (const auto* d = std::get_if<double>(&v)) return {*d};
  if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  throw ConfigError("config key '" + key + "' must be a number or an array of numbers, got " + type_name(v));
}

}  // namespace rpcoh
