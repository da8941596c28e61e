#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pdsys {

/// A value together with where it was written, for diagnostics.
struct ConfigValue {
  std::string text;
  int line = 0;
  int column = 0;
};

/// Flat sectioned key-value document:
///
///   # comment
///   [section]
///   key = value        ; numbers, booleans, strings, comma lists
///
/// Keys are unique per section. Parse and type errors raise ConfigParseError
/// with "line:column" in the message.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<string>");
  /// Throws IoError when the file cannot be read.
  static Config load(const std::filesystem::path& path);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;
  /// Keys of a section in lexicographic order.
  std::vector<std::string> keys(const std::string& section) const;
  std::optional<ConfigValue> find(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::optional<std::string>& fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key,
                    const std::optional<double>& fallback = std::nullopt) const;
  long long get_int(const std::string& section, const std::string& key,
                    const std::optional<long long>& fallback = std::nullopt) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        const std::optional<std::uint64_t>& fallback = std::nullopt) const;
  bool get_bool(const std::string& section, const std::string& key,
                const std::optional<bool>& fallback = std::nullopt) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::optional<std::vector<double>>& fallback =
                                      std::nullopt) const;
  std::vector<long long> get_ints(const std::string& section, const std::string& key) const;

  /// Rejects sections outside the list.
  void require_sections(const std::set<std::string>& allowed) const;
  /// Rejects keys of a section outside the list.
  void require_keys(const std::string& section, const std::set<std::string>& allowed) const;

  const std::string& source() const { return source_; }

 private:
  [[noreturn]] void fail(const ConfigValue& at, const std::string& what) const;
  const ConfigValue& lookup(const std::string& section, const std::string& key) const;

  std::string source_;
  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
  std::map<std::string, int> section_lines_;
};

}  // namespace pdsys
