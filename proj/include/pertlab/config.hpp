#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pertlab {

enum class ValueType { boolean, integer, real, string, list };

/// One typed scalar (or a list of reals) from a configuration document.
struct ConfigValue {
  ValueType type = ValueType::string;
  bool b = false;
  long long i = 0;
  double x = 0.0;
  std::string s;
  std::vector<double> list;
  /// Source text, kept for canonical dumps and error messages.
  std::string text;
  int line = 0;
};

std::string type_name(ValueType t);
/// Normalized text: reals at 17 significant digits.
std::string canonical_text(const ConfigValue& v);

/// Flat key tree: one `dotted.key = value` per line, `#` starts a comment.
///
/// Values are `true`/`false`, integers, reals (`inf` allowed), double-quoted
/// strings, or bracketed lists of reals.
class ConfigDocument {
 public:
  /// Throws ConfigError naming the line on malformed input or duplicate keys.
  static ConfigDocument parse(std::string_view text, const std::string& source = "<config>");

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const ConfigValue& at(const std::string& key) const;
  void set(const std::string& key, ConfigValue v) { entries_[key] = std::move(v); }
  void erase(const std::string& key) { entries_.erase(key); }
  /// Drops every key below `prefix.`.
  void erase_group(const std::string& prefix);
  const std::map<std::string, ConfigValue>& entries() const { return entries_; }

  /// Sorted `key = value` lines; equal documents give equal text.
  std::string canonical() const;

 private:
  std::map<std::string, ConfigValue> entries_;
};

}  // namespace pertlab
