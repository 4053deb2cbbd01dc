#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace rpcoh {

/// One value of a flat key-value config file. Accepted syntax is the
/// TOML subset `key = value` with numbers, "strings", true/false and
/// one-level arrays of numbers; `#` starts a comment.
using ConfigValue = std::variant<double, std::string, bool, std::vector<double>>;

class ConfigFile {
 public:
  /// Throws ParseError naming the line for anything outside the subset and
  /// for repeated keys.
  static ConfigFile parse(std::istream& in);
  static ConfigFile load(const std::string& path);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, ConfigValue>& values() const noexcept { return values_; }
  void set(const std::string& key, ConfigValue value) { values_[key] = std::move(value); }

  /// Typed access; throws ConfigError naming the key on a type mismatch.
  double number(const std::string& key) const;
  std::string string(const std::string& key) const;
  bool boolean(const std::string& key) const;
  /// A bare number is accepted as a one-element list.
  std::vector<double> numbers(const std::string& key) const;

 private:
  const ConfigValue& at(const std::string& key) const;
  std::map<std::string, ConfigValue> values_;
};

}  // namespace rpcoh
