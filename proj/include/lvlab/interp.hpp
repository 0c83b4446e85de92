#pragma once

#include <vector>

#include "lvlab/types.hpp"

namespace lvlab {

// Fourth-order finite-difference slopes on a uniform grid (one-sided at the
// two nodes nearest each boundary). Needs at least 5 nodes.
std::vector<double> slopes_fourth_order(const GridSpec& grid, const std::vector<double>& values);

// C1 piecewise-cubic interpolant. Evaluation outside the grid throws GridMismatch.
class CubicHermite {
public:
  CubicHermite(GridSpec grid, std::vector<double> values);

  double operator()(double x) const;
  double derivative(double x) const;

  const GridSpec& grid() const { return grid_; }

private:
  GridSpec grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

// Resamples values from one uniform grid onto another contained in it.
std::vector<double> resample(const GridSpec& from, const std::vector<double>& values,
                             const GridSpec& to);

// Abscissa where the Hermite interpolant crosses the level (rightmost such
// crossing by default). Throws LevelNotCrossed when no sign change exists.
double find_level_crossing(const GridSpec& grid, const std::vector<double>& values, double level,
                           bool rightmost = true);

} // namespace lvlab
