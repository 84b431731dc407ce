#include "presto/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

namespace {

std::string trim(const std::string& s) {
  auto b = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  auto e = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return b < e ? std::string(b, e) : std::string();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// The INI reader only accepts whole-line comments; drop trailing ones too.
std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    out << trim(line) << '\n';
  }
  return out.str();
}

std::string where(const std::string& section, const std::string& key) {
  return section.empty() ? key : fmt::format("[{}] {}", section, key);
}

double to_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(fmt::format("{}: empty numeric value", context));
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw ConfigError(fmt::format("{}: '{}' is not a number", context, t));
  return v;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

ExponentPair parse_pair(const std::string& text) {
  const auto parts = split_list(text, '/');
  if (parts.size() != 2) throw ConfigError(fmt::format("'{}' is not an exponent pair p/q", text));
  try {
    std::size_t used_p = 0, used_q = 0;
    const long long p = std::stoll(parts[0], &used_p);
    const long long q = std::stoll(parts[1], &used_q);
    if (used_p != parts[0].size() || used_q != parts[1].size()) throw std::invalid_argument("trailing");
    return ExponentPair{p, q};
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("'{}' is not an exponent pair p/q", text));
  }
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

Config Config::parse(const std::string& text, const std::filesystem::path& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(strip_comments(text));
  try {
    boost::property_tree::read_ini(in, cfg.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("{}: line {}: {}", origin.empty() ? "<config>" : origin.string(), e.line(),
                                  e.message()));
  }
  return cfg;
}

bool Config::has_section(const std::string& section) const {
  const auto it = tree_.find(section);
  return it != tree_.not_found() && !it->second.empty();
}

bool Config::has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
  const boost::property_tree::ptree* node = &tree_;
  if (!section.empty()) {
    const auto it = tree_.find(section);
    if (it == tree_.not_found()) return std::nullopt;
    node = &it->second;
  }
  const auto kv = node->find(key);
  if (kv == node->not_found() || !kv->second.empty()) return std::nullopt;
  return kv->second.data();
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  auto v = raw(section, key);
  if (!v) throw ConfigError(fmt::format("missing required key {}", where(section, key)));
  return *v;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return raw(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return to_double(get_string(section, key), where(section, key));
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  auto v = raw(section, key);
  return v ? to_double(*v, where(section, key)) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key, long long fallback) const {
  auto v = raw(section, key);
  if (!v) return fallback;
  const std::string t = trim(*v);
  try {
    std::size_t used = 0;
    const long long out = std::stoll(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", where(section, key), t));
  }
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  auto v = raw(section, key);
  if (!v) return fallback;
  const std::string t = lower(trim(*v));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", where(section, key), t));
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get_string(section, key))) out.push_back(to_double(item, where(section, key)));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& section, const std::string& key) const {
  return split_list(get_string(section, key));
}

std::vector<ExponentPair> Config::get_pairs(const std::string& section, const std::string& key) const {
  std::vector<ExponentPair> out;
  for (const auto& item : split_list(get_string(section, key))) {
    try {
      out.push_back(parse_pair(item));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: {}", where(section, key), e.what()));
    }
  }
  return out;
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto it = tree_.find(section);
  if (it == tree_.not_found()) return out;
  for (const auto& kv : it->second) out.push_back(kv.first);
  return out;
}

std::filesystem::path Config::resolve(const std::string& relative) const {
  std::filesystem::path p(relative);
  if (p.is_absolute() || origin_.empty()) return p;
  return origin_.parent_path() / p;
}

}  // namespace presto
