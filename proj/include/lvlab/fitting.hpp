#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lvlab/errors.hpp"

namespace lvlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  double slope_se = 0.0; // standard error of the slope
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  require(m == y.size(), Code::InvalidArgument, "fit_line: length mismatch");
  require(m >= 2, Code::InvalidArgument, "fit_line: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  require(sxx > 0.0, Code::InvalidArgument, "fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  f.slope_se = (m > 2) ? std::sqrt(ss_res / static_cast<double>(m - 2) / sxx) : 0.0;
  return f;
}

} // namespace lvlab
