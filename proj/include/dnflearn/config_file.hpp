#pragma once

#include <map>
#include <string>

namespace dnflearn {

// Flat "key = value" text. '#' starts a comment; blank lines are ignored.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  long long get_int64(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// Throws ConfigError if the file cannot be read or a line is malformed.
KeyValues read_key_values(const std::string& path);

}  // namespace dnflearn
