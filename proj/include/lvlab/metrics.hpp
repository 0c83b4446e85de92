#pragma once

#include <utility>
#include <vector>

#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

namespace lvlab {

enum class Component { U, V };

const char* component_name(Component c);

// Level-set history of one component across a trajectory of snapshots.
// Positions are reported in lab coordinates (grid coordinate plus
// frame_speed * time), so speeds read off the same way for co-moving and
// resting trajectories.
struct FrontTrack {
  Component component = Component::U;
  double level = 0.5;
  std::vector<double> times;
  std::vector<double> positions;
  double fitted_speed = 0.0;
  double fit_t_from = 0.0; // speed fitted on [fit_t_from, fit_t_to], the last
  double fit_t_to = 0.0;   // half of the track
  double residual = 0.0;   // rms residual of the linear position fit
};

// Rightmost level crossing per snapshot; needs at least four snapshots and a
// crossing in each (LevelNotCrossed names the first failing time otherwise).
FrontTrack track_level_set(const std::vector<StatePair>& trajectory, Component component,
                           double level = 0.5);

// Log-linear tail fit: values ~ prefactor * exp(-rate * x) on the window.
// A left tail that grows toward the right comes out with negative rate.
struct DecayFit {
  double rate = 0.0;
  double prefactor = 0.0;
  double x_from = 0.0;
  double x_to = 0.0;
  double r_squared = 0.0;
};

DecayFit fit_decay(const GridSpec& grid, const std::vector<double>& values, double x_from,
                   double x_to);
DecayFit fit_decay(const StatePair& state, Component component, double x_from, double x_to);

// Rightmost contiguous node run with values inside [lo, hi]; the default band
// keeps the fit clear of roundoff below and nonlinear saturation above.
std::pair<double, double> decay_window(const GridSpec& grid, const std::vector<double>& values,
                                       double lo = 1e-8, double hi = 1e-2);
std::pair<double, double> decay_window(const StatePair& state, Component component,
                                       double lo = 1e-8, double hi = 1e-2);

// Sup of |state - target|_1 over the cone s1*t <= x <= s2*t, measured at the
// last quarter of the snapshot times. Cone edges clamp to the domain minus an
// edge buffer (the finite-domain proxy for unbounded cones); a cone that is
// empty at every examined time is an error (DomainError).
struct RegionReport {
  std::vector<double> times;
  std::vector<double> sups; // per-time sup over the clamped cone
  double sup = 0.0;
};

RegionReport region_check(const std::vector<StatePair>& trajectory, double s1, double s2,
                          const Equilibrium& target, double edge_margin = 5.0);

// Shift h minimizing sup|component(T, x) - reference(x - speed*T - h)| at the
// final snapshot, over a window centered on the measured front (level 0.5).
// Errors with NonConvergence if the best sup error still exceeds 0.1.
struct ShapeLock {
  double fitted_shift = 0.0;
  double sup_error = 0.0;
};

ShapeLock lock_shape(const std::vector<StatePair>& trajectory, const WaveProfile& reference,
                     double speed, Component component = Component::V,
                     double window_halfwidth = 30.0);

} // namespace lvlab
