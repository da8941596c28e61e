#include "pdsys/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pdsys/error.hpp"

namespace pdsys {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// [first, last) with surrounding blanks removed; first is moved to the start.
void trim(const std::string& s, std::size_t& first, std::size_t& last) {
  while (first < last && is_space(s[first])) ++first;
  while (last > first && is_space(s[last - 1])) --last;
}

bool is_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

std::string location(const std::string& source, int line, int column) {
  return source + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::vector<std::pair<std::string, int>> split_list(const ConfigValue& v) {
  std::vector<std::pair<std::string, int>> items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = v.text.find(',', start);
    std::size_t first = start;
    std::size_t last = comma == std::string::npos ? v.text.size() : comma;
    trim(v.text, first, last);
    items.emplace_back(v.text.substr(first, last - first), v.column + static_cast<int>(first));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::optional<double> to_double(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) return std::nullopt;
  return x;
}

std::optional<long long> to_int(const std::string& s) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  const auto error = [&](int column, const std::string& what) {
    throw Error(ErrorCode::kConfigParseError, location(source, lineno, column) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = 0;
    std::size_t last = line.size();
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) last = comment;
    trim(line, first, last);
    if (first == last) continue;
    const int col = static_cast<int>(first) + 1;
    if (line[first] == '[') {
      const std::size_t close = line.find(']', first);
      if (close == std::string::npos || close >= last) error(col, "missing ']' in section header");
      if (close + 1 != last) error(static_cast<int>(close) + 2, "unexpected text after section header");
      std::size_t a = first + 1;
      std::size_t b = close;
      trim(line, a, b);
      section = line.substr(a, b - a);
      if (!is_name(section)) error(static_cast<int>(a) + 1, "invalid section name '" + section + "'");
      if (cfg.sections_.count(section)) error(col, "duplicate section [" + section + "]");
      cfg.sections_[section];
      cfg.section_lines_[section] = lineno;
      continue;
    }
    const std::size_t eq = line.find('=', first);
    if (eq == std::string::npos || eq >= last) error(col, "expected 'key = value'");
    std::size_t ka = first;
    std::size_t kb = eq;
    trim(line, ka, kb);
    const std::string key = line.substr(ka, kb - ka);
    if (!is_name(key)) error(static_cast<int>(ka) + 1, "invalid key '" + key + "'");
    if (section.empty()) error(col, "entry outside of any section");
    std::size_t va = eq + 1;
    std::size_t vb = last;
    trim(line, va, vb);
    if (va == vb) error(static_cast<int>(eq) + 2, "missing value for '" + key + "'");
    std::string value = line.substr(va, vb - va);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
      ++va;
    }
    auto& entries = cfg.sections_[section];
    if (entries.count(key)) error(static_cast<int>(ka) + 1, "duplicate key '" + key + "'");
    entries[key] = ConfigValue{value, lineno, static_cast<int>(va) + 1};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path.string());
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& [k, v] : it->second) out.push_back(k);
  return out;
}

std::optional<ConfigValue> Config::find(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return sections_.at(section).at(key);
}

void Config::fail(const ConfigValue& at, const std::string& what) const {
  throw Error(ErrorCode::kConfigParseError, location(source_, at.line, at.column) + ": " + what);
}

const ConfigValue& Config::lookup(const std::string& section, const std::string& key) const {
  if (!has(section, key)) {
    const auto it = section_lines_.find(section);
    const std::string where = it == section_lines_.end()
                                  ? source_ + ": missing section [" + section + "]"
                                  : location(source_, it->second, 1) + ": section [" + section + "]";
    throw Error(ErrorCode::kConfigParseError, where + " requires key '" + key + "'");
  }
  return sections_.at(section).at(key);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::optional<std::string>& fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  return lookup(section, key).text;
}

double Config::get_double(const std::string& section, const std::string& key,
                          const std::optional<double>& fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const ConfigValue& v = lookup(section, key);
  const auto x = to_double(v.text);
  if (!x) fail(v, "'" + key + "' expects a finite number, got '" + v.text + "'");
  return *x;
}

long long Config::get_int(const std::string& section, const std::string& key,
                          const std::optional<long long>& fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const ConfigValue& v = lookup(section, key);
  const auto x = to_int(v.text);
  if (!x) fail(v, "'" + key + "' expects an integer, got '" + v.text + "'");
  return *x;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              const std::optional<std::uint64_t>& fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const ConfigValue& v = lookup(section, key);
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), x);
  if (ec != std::errc() || ptr != v.text.data() + v.text.size()) {
    fail(v, "'" + key + "' expects an unsigned 64-bit integer, got '" + v.text + "'");
  }
  return x;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      const std::optional<bool>& fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const ConfigValue& v = lookup(section, key);
  if (v.text == "true" || v.text == "1" || v.text == "yes") return true;
  if (v.text == "false" || v.text == "0" || v.text == "no") return false;
  fail(v, "'" + key + "' expects true or false, got '" + v.text + "'");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::optional<std::vector<double>>& fallback) const {
  if (fallback && !has(section, key)) return *fallback;
  const ConfigValue& v = lookup(section, key);
  std::vector<double> out;
  for (const auto& [item, column] : split_list(v)) {
    const auto x = to_double(item);
    if (!x) fail(ConfigValue{item, v.line, column}, "list '" + key + "' has a non-numeric entry '" + item + "'");
    out.push_back(*x);
  }
  return out;
}

std::vector<long long> Config::get_ints(const std::string& section, const std::string& key) const {
  const ConfigValue& v = lookup(section, key);
  std::vector<long long> out;
  for (const auto& [item, column] : split_list(v)) {
    const auto x = to_int(item);
    if (!x) fail(ConfigValue{item, v.line, column}, "list '" + key + "' has a non-integer entry '" + item + "'");
    out.push_back(*x);
  }
  return out;
}

void Config::require_sections(const std::set<std::string>& allowed) const {
  for (const auto& [name, entries] : sections_) {
    if (!allowed.count(name)) {
      throw Error(ErrorCode::kConfigParseError,
                  location(source_, section_lines_.at(name), 1) + ": unknown section [" + name + "]");
    }
  }
}

void Config::require_keys(const std::string& section, const std::set<std::string>& allowed) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return;
  for (const auto& [key, v] : it->second) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::kConfigParseError,
                  location(source_, v.line, 1) + ": unknown key '" + key + "' in [" + section + "]");
    }
  }
}

}  // namespace pdsys
