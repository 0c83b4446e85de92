#include "lvlab/interp.hpp"

#include <cmath>

namespace lvlab {

std::vector<double> slopes_fourth_order(const GridSpec& grid, const std::vector<double>& w) {
  grid.validate();
  const std::size_t n = grid.n;
  require(w.size() == n, Code::GridMismatch, "slopes: length mismatch");
  require(n >= 5, Code::InvalidArgument, "slopes: need at least 5 nodes");
  const double h = grid.h();
  std::vector<double> s(n);
  s[0] = (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) / (12.0 * h);
  s[1] = (-3.0 * w[0] - 10.0 * w[1] + 18.0 * w[2] - 6.0 * w[3] + w[4]) / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    s[i] = (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) / (12.0 * h);
  }
  s[n - 2] = (3.0 * w[n - 1] + 10.0 * w[n - 2] - 18.0 * w[n - 3] + 6.0 * w[n - 4] - w[n - 5]) /
             (12.0 * h);
  s[n - 1] = (25.0 * w[n - 1] - 48.0 * w[n - 2] + 36.0 * w[n - 3] - 16.0 * w[n - 4] +
              3.0 * w[n - 5]) /
             (12.0 * h);
  return s;
}

CubicHermite::CubicHermite(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  slopes_ = slopes_fourth_order(grid_, values_);
}

double CubicHermite::operator()(double x) const {
  const double h = grid_.h();
  require(x >= grid_.x_min - 1e-12 * (1.0 + std::abs(grid_.x_min)) &&
              x <= grid_.x_max + 1e-12 * (1.0 + std::abs(grid_.x_max)),
          Code::GridMismatch, "CubicHermite: point outside grid");
  double cell = std::floor((x - grid_.x_min) / h);
  if (cell < 0.0) cell = 0.0;
  std::size_t j = static_cast<std::size_t>(cell);
  if (j >= grid_.n - 1) j = grid_.n - 2;
  const double t = (x - grid_.x(j)) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[j] + h * h10 * slopes_[j] + h01 * values_[j + 1] + h * h11 * slopes_[j + 1];
}

double CubicHermite::derivative(double x) const {
  const double h = grid_.h();
  require(x >= grid_.x_min - 1e-12 * (1.0 + std::abs(grid_.x_min)) &&
              x <= grid_.x_max + 1e-12 * (1.0 + std::abs(grid_.x_max)),
          Code::GridMismatch, "CubicHermite: point outside grid");
  double cell = std::floor((x - grid_.x_min) / h);
  if (cell < 0.0) cell = 0.0;
  std::size_t j = static_cast<std::size_t>(cell);
  if (j >= grid_.n - 1) j = grid_.n - 2;
  const double t = (x - grid_.x(j)) / h;
  const double t2 = t * t;
  const double dh00 = (6.0 * t2 - 6.0 * t) / h;
  const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
  const double dh11 = 3.0 * t2 - 2.0 * t;
  return dh00 * values_[j] + dh10 * slopes_[j] + dh01 * values_[j + 1] + dh11 * slopes_[j + 1];
}

double find_level_crossing(const GridSpec& grid, const std::vector<double>& values, double level,
                           bool rightmost) {
  grid.validate();
  require(values.size() == grid.n, Code::GridMismatch, "find_level_crossing: length mismatch");
  const std::size_t n = grid.n;
  std::size_t cell = n; // sentinel: none found
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j = rightmost ? n - 2 - i : i;
    const double a = values[j] - level, b = values[j + 1] - level;
    if (a == 0.0 || b == 0.0 || (a > 0.0) != (b > 0.0)) {
      cell = j;
      break;
    }
  }
  if (cell == n) fail(Code::LevelNotCrossed, "find_level_crossing: level not attained");
  if (values[cell + 1] == level) return grid.x(cell + 1);
  if (values[cell] == level) return grid.x(cell);
  CubicHermite f(grid, values);
  double lo = grid.x(cell), hi = grid.x(cell + 1);
  double flo = f(lo) - level, fhi = f(hi) - level;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  // interpolant and nodal values agree at nodes, so the bracket is genuine
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - level;
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    if (hi - lo < 1e-15 * (1.0 + std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> resample(const GridSpec& from, const std::vector<double>& values,
                             const GridSpec& to) {
  to.validate();
  require(to.x_min >= from.x_min - 1e-12 && to.x_max <= from.x_max + 1e-12, Code::GridMismatch,
          "resample: target grid leaves source domain");
  CubicHermite f(from, values);
  std::vector<double> out(to.n);
  for (std::size_t i = 0; i < to.n; ++i) out[i] = f(to.x(i));
  return out;
}

} // namespace lvlab
