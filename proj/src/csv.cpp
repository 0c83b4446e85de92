#include "lvlab/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lvlab {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl), width_(header.size()) {
  require(!header.empty(), Code::InvalidArgument, "csv: empty header");
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    fail(Code::IoError, "cannot open csv for writing: " + path);
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << header[i];
  }
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == width_, Code::InvalidArgument, "csv: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << fmt_g17(values[i]);
  }
  impl_->out << '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  require(cells.size() == width_, Code::InvalidArgument, "csv: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << cells[i];
  }
  impl_->out << '\n';
}

void Manifest::note(const std::string& key, const std::string& text) {
  notes_.emplace_back(key, text);
}

void Manifest::value(const std::string& key, double v) { values_.emplace_back(key, v); }

void Manifest::check(const CheckResult& r) { checks_.push_back(r); }

bool Manifest::all_pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

std::string Manifest::render() const {
  std::ostringstream out;
  for (const auto& [k, v] : notes_) out << k << " = " << v << '\n';
  for (const auto& [k, v] : values_) out << k << " = " << fmt_g17(v) << '\n';
  for (const auto& c : checks_) {
    out << "check " << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << " measured="
        << fmt_g17(c.measured) << " bound=" << fmt_g17(c.bound);
    if (!c.detail.empty()) out << ' ' << c.detail;
    out << '\n';
  }
  return out.str();
}

std::string Manifest::write(const std::string& dir) const {
  ensure_dir(dir);
  const std::string path = dir + "/manifest.txt";
  std::ofstream out(path);
  if (!out) fail(Code::IoError, "cannot write manifest: " + path);
  out << render();
  return path;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Code::IoError, "cannot create directory: " + dir + " (" + ec.message() + ")");
}

} // namespace lvlab
