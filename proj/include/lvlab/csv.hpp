#pragma once

#include <string>
#include <vector>

#include "lvlab/errors.hpp"

namespace lvlab {

// Round-trip-precision numeric formatting used in every report.
std::string fmt_g17(double v);

// Minimal CSV emitter; numbers are written with 17 significant digits.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);

private:
  struct Impl;
  Impl* impl_;
  std::size_t width_;
};

// One verified statement: a named quantity against its bound.
struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

// Accumulates reported values and checks, then renders manifest.txt.
class Manifest {
public:
  void note(const std::string& key, const std::string& text);
  void value(const std::string& key, double v);
  void check(const CheckResult& r);

  bool all_pass() const;
  const std::vector<CheckResult>& checks() const { return checks_; }

  // Writes <dir>/manifest.txt (creating dir when needed) and returns the path.
  std::string write(const std::string& dir) const;

  std::string render() const;

private:
  std::vector<std::pair<std::string, std::string>> notes_;
  std::vector<std::pair<std::string, double>> values_;
  std::vector<CheckResult> checks_;
};

// Creates the directory (and parents) if absent; throws IoError on failure.
void ensure_dir(const std::string& dir);

} // namespace lvlab
