#include "lvlab/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lvlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Code::IoError, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, Code::InvalidArgument,
            "config line " + std::to_string(lineno) + ": missing '='");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    require(!key.empty(), Code::InvalidArgument,
            "config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  require(!key.empty(), Code::InvalidArgument, "config: empty key");
  kv_[key] = value;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  require(it != kv_.end(), Code::InvalidArgument, "config: missing key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(end != s.c_str() && *end == '\0' && errno == 0, Code::InvalidArgument,
          "config: key '" + key + "' is not a number: '" + s + "'");
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
  const std::string s = get_string(key);
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  require(end != s.c_str() && *end == '\0' && errno == 0, Code::InvalidArgument,
          "config: key '" + key + "' is not an integer: '" + s + "'");
  return v;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

ModelParams params_from_config(const Config& cfg) {
  ModelParams p;
  p.a = cfg.get_double("model.a");
  p.b = cfg.get_double("model.b");
  p.d = cfg.get_double("model.d");
  p.r = cfg.get_double("model.r");
  p.validate();
  return p;
}

GridSpec grid_from_config(const Config& cfg) {
  GridSpec g;
  g.x_min = cfg.get_double("grid.x_min");
  g.x_max = cfg.get_double("grid.x_max");
  const std::int64_t n = cfg.get_int("grid.n");
  require(n >= 3, Code::InvalidArgument, "config: grid.n must be at least 3");
  g.n = static_cast<std::size_t>(n);
  g.validate();
  return g;
}

} // namespace lvlab
