#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lvlab/errors.hpp"
#include "lvlab/types.hpp"

namespace lvlab {

// Flat key-value run configuration. One "section.key = value" entry per line;
// '#' starts a comment; later assignments override earlier ones.
class Config {
public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

private:
  std::map<std::string, std::string> kv_;
};

// Reads model parameters from model.{a,b,d,r} (all required).
ModelParams params_from_config(const Config& cfg);

// Reads grid.{x_min,x_max,n} (all required).
GridSpec grid_from_config(const Config& cfg);

} // namespace lvlab
