#include "mfpde/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mfpde {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        std::ostringstream msg;
        msg << "config: malformed section at line " << lineno;
        throw ConfigError(msg.str());
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config: expected key = value at line " << lineno;
      throw ConfigError(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream msg;
      msg << "config: empty key at line " << lineno;
      throw ConfigError(msg.str());
    }
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::require(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s != sections_.end()) {
    const auto k = s->second.find(key);
    if (k != s->second.end()) return k->second;
  }
  throw ConfigError("config: missing required key '" + key + "' in section [" + section + "]");
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? require(section, key) : fallback;
}

double Config::require_double(const std::string& section, const std::string& key) const {
  const std::string v = require(section, key);
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not a number: '" + v + "'");
  return out;
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? require_double(section, key) : fallback;
}

std::int64_t Config::get_int_or(const std::string& section, const std::string& key,
                                std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = require(section, key);
  char* end = nullptr;
  const long long out = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not an integer: '" + v + "'");
  return out;
}

bool Config::get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = require(section, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' is not a boolean: '" + v + "'");
}

std::uint64_t Config::require_seed(const std::string& section) const {
  // no seed, no run: nondeterministic experiments are rejected
  const std::string v = require(section, "seed");
  char* end = nullptr;
  const unsigned long long out = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: seed is not an unsigned integer: '" + v + "'");
  return out;
}

std::vector<Eigen::Index> Config::require_index_list(const std::string& section,
                                                     const std::string& key) const {
  const std::string v = require(section, key);
  std::vector<Eigen::Index> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    char* end = nullptr;
    const long long n = std::strtoll(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0' || n < 1)
      throw ConfigError("config: key '" + key + "' must be a list of positive integers");
    out.push_back(static_cast<Eigen::Index>(n));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' is empty");
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = value;
}

std::vector<std::pair<std::string, std::string>> Config::flatten() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [sec, kv] : sections_)
    for (const auto& [k, v] : kv)
      out.emplace_back(sec.empty() ? k : sec + "." + k, v);
  return out;  // std::map iteration is already sorted
}

}  // namespace mfpde
