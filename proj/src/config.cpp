#include "pertlab/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <sstream>

#include "pertlab/errors.hpp"

namespace pertlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_real(std::string_view t, double& out) {
  if (t == "inf" || t == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (t == "-inf") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && p == t.data() + t.size();
}

bool parse_integer(std::string_view t, long long& out) {
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && p == t.data() + t.size();
}

bool valid_key(std::string_view k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  char prev = 0;
  for (char ch : k) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
    if (!ok || (ch == '.' && prev == '.')) return false;
    prev = ch;
  }
  return true;
}

std::string where(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

ConfigValue parse_value(std::string_view t, const std::string& source, int line) {
  ConfigValue v;
  v.text = std::string(t);
  v.line = line;
  if (t.empty()) throw ConfigError(where(source, line) + "missing value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') throw ConfigError(where(source, line) + "unterminated string");
    v.type = ValueType::string;
    v.s = std::string(t.substr(1, t.size() - 2));
    if (v.s.find('"') != std::string::npos) throw ConfigError(where(source, line) + "quote inside string");
    return v;
  }
  if (t.front() == '[') {
    if (t.back() != ']') throw ConfigError(where(source, line) + "unterminated list");
    v.type = ValueType::list;
    std::string_view body = trim(t.substr(1, t.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const std::string_view item = trim(body.substr(0, comma));
      double x = 0.0;
      if (!parse_real(item, x)) throw ConfigError(where(source, line) + "list item '" + std::string(item) + "' is not a number");
      v.list.push_back(x);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
      if (body.empty()) throw ConfigError(where(source, line) + "trailing comma in list");
    }
    return v;
  }
  if (t == "true" || t == "false") {
    v.type = ValueType::boolean;
    v.b = t == "true";
    return v;
  }
  if (parse_integer(t, v.i)) {
    v.type = ValueType::integer;
    v.x = static_cast<double>(v.i);
    return v;
  }
  if (parse_real(t, v.x)) {
    v.type = ValueType::real;
    return v;
  }
  throw ConfigError(where(source, line) + "cannot read value '" + std::string(t) + "' (strings need double quotes)");
}

}  // namespace

std::string type_name(ValueType t) {
  switch (t) {
    case ValueType::boolean: return "boolean";
    case ValueType::integer: return "integer";
    case ValueType::real: return "real";
    case ValueType::string: return "string";
    case ValueType::list: return "list";
  }
  return "?";
}

ConfigDocument ConfigDocument::parse(std::string_view text, const std::string& source) {
  ConfigDocument doc;
  int line = 0;
  while (!text.empty()) {
    ++line;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    // A '#' inside a string is kept.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string_view body = trim(raw.substr(0, cut));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where(source, line) + "expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    if (!valid_key(key)) throw ConfigError(where(source, line) + "invalid key '" + key + "'");
    if (doc.has(key)) throw ConfigError(where(source, line) + "duplicate key '" + key + "'");
    doc.entries_[key] = parse_value(trim(body.substr(eq + 1)), source, line);
  }
  return doc;
}

const ConfigValue& ConfigDocument::at(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

void ConfigDocument::erase_group(const std::string& prefix) {
  const std::string p = prefix + ".";
  for (auto it = entries_.lower_bound(p); it != entries_.end() && it->first.compare(0, p.size(), p) == 0;)
    it = entries_.erase(it);
}

std::string canonical_text(const ConfigValue& v) {
  auto real = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  switch (v.type) {
    case ValueType::boolean: return v.b ? "true" : "false";
    case ValueType::integer: return std::to_string(v.i);
    case ValueType::real: return real(v.x);
    case ValueType::string: return "\"" + v.s + "\"";
    case ValueType::list: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.list.size(); ++i) out += (i ? ", " : "") + real(v.list[i]);
      return out + "]";
    }
  }
  return v.text;
}

std::string ConfigDocument::canonical() const {
  std::ostringstream os;
  for (const auto& [k, v] : entries_) os << k << " = " << canonical_text(v) << "\n";
  return os.str();
}

}  // namespace pertlab
