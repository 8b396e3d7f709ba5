#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfpde {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain-text "key = value" configuration with [section] headers and '#'
// comments. Every experiment run embeds the resolved flat view into its
// output header.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string require(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  double require_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  std::uint64_t require_seed(const std::string& section) const;
  std::vector<Eigen::Index> require_index_list(const std::string& section,
                                               const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  // sorted "section.key" pairs for deterministic output headers
  std::vector<std::pair<std::string, std::string>> flatten() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace mfpde
