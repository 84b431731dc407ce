#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "presto/mathcore.hpp"

namespace presto {

/// Flat INI-style configuration: `[section]` headers, `key = value` lines,
/// `#` or `;` comments. Lists are comma separated; exponent pairs are `p/q`.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text, const std::filesystem::path& origin = {});

  const std::filesystem::path& origin() const { return origin_; }
  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key) const;
  std::vector<ExponentPair> get_pairs(const std::string& section, const std::string& key) const;

  /// Keys of a section in file order.
  std::vector<std::string> keys(const std::string& section) const;
  /// Paths in the file are resolved against the config's directory.
  std::filesystem::path resolve(const std::string& relative) const;

 private:
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  boost::property_tree::ptree tree_;
  std::filesystem::path origin_;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',');
ExponentPair parse_pair(const std::string& text);

}  // namespace presto
