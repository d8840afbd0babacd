#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bounds/core.hpp"

namespace bounds::cli {

enum class KeyType { integer, real, boolean, text, reals };

/// One recognized `section.key` with its default and, for text keys, the
/// allowed values (empty means free text).
struct KeyDef {
  std::string key;
  KeyType type = KeyType::text;
  std::string default_value;
  std::vector<std::string> choices;
  std::string help;
};

const std::vector<KeyDef>& config_schema();

/// Raised for a key that is not part of the schema or a value that does not
/// parse. Carries the offending `section.key`.
class ConfigKeyError : public InputError {
 public:
  ConfigKeyError(std::string key, const std::string& what) : InputError(what), key(std::move(key)) {}
  std::string key;
};

/// Scenario configuration: every schema key with a value. Files are INI
/// with sections; keys outside the schema are rejected.
class Config {
 public:
  /// All defaults.
  Config();

  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::string& path);

  /// Validates and stores one value; `key` is `section.key`.
  void set(const std::string& key, const std::string& value);

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;
  std::uint64_t seed() const;

  /// INI with every key, grouped by section in schema order.
  void write(std::ostream& out) const;

  friend bool operator==(const Config&, const Config&) = default;

 private:
  const KeyDef& def(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

/// Comma-separated tokens with surrounding blanks removed; empty tokens dropped.
std::vector<std::string> split_list(const std::string& text);

}  // namespace bounds::cli
