#include "lvlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lvlab/errors.hpp"
#include "lvlab/fitting.hpp"
#include "lvlab/interp.hpp"

namespace lvlab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const std::vector<double>& component_of(const StatePair& s, Component c) {
  return c == Component::U ? s.u : s.v;
}

} // namespace

const char* component_name(Component c) { return c == Component::U ? "u" : "v"; }

FrontTrack track_level_set(const std::vector<StatePair>& trajectory, Component component,
                           double level) {
  require(trajectory.size() >= 4, Code::InvalidArgument,
          "track_level_set: need at least four snapshots");
  require(level > 0.0 && level < 1.0, Code::InvalidArgument,
          "track_level_set: level must lie in (0, 1)");
  FrontTrack track;
  track.component = component;
  track.level = level;
  for (const StatePair& s : trajectory) {
    double pos = 0.0;
    try {
      pos = find_level_crossing(s.grid, component_of(s, component), level, true);
    } catch (const Error& e) {
      if (e.code() == Code::LevelNotCrossed)
        fail(Code::LevelNotCrossed, "track_level_set: level " + num(level) + " not crossed by " +
                                        component_name(component) + " at t = " + num(s.time));
      throw;
    }
    track.times.push_back(s.time);
    track.positions.push_back(pos + s.frame_speed * s.time);
  }
  // Speed from the last half of the track only; the early transient is not
  // what the cones predict.
  const std::size_t n = track.times.size();
  const std::size_t k0 = std::min(n - 2, n / 2);
  std::vector<double> t(track.times.begin() + static_cast<std::ptrdiff_t>(k0), track.times.end());
  std::vector<double> x(track.positions.begin() + static_cast<std::ptrdiff_t>(k0),
                        track.positions.end());
  const LineFit fit = fit_line(t, x);
  track.fitted_speed = fit.slope;
  track.fit_t_from = t.front();
  track.fit_t_to = t.back();
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = x[i] - (fit.intercept + fit.slope * t[i]);
    ss += e * e;
  }
  track.residual = std::sqrt(ss / static_cast<double>(t.size()));
  return track;
}

DecayFit fit_decay(const GridSpec& grid, const std::vector<double>& values, double x_from,
                   double x_to) {
  require(grid.n == values.size(), Code::GridMismatch, "fit_decay: value count");
  require(x_from < x_to, Code::InvalidArgument, "fit_decay: empty window");
  std::vector<double> xs, logs;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if (x < x_from - 1e-12 || x > x_to + 1e-12) continue;
    require(values[i] > 0.0, Code::DomainError,
            "fit_decay: non-positive value at x = " + num(x));
    xs.push_back(x);
    logs.push_back(std::log(values[i]));
  }
  require(xs.size() >= 3, Code::InvalidArgument, "fit_decay: window holds fewer than three nodes");
  const LineFit line = fit_line(xs, logs);
  DecayFit fit;
  fit.rate = -line.slope;
  fit.prefactor = std::exp(line.intercept);
  fit.x_from = xs.front();
  fit.x_to = xs.back();
  fit.r_squared = line.r2;
  return fit;
}

DecayFit fit_decay(const StatePair& state, Component component, double x_from, double x_to) {
  return fit_decay(state.grid, component_of(state, component), x_from, x_to);
}

std::pair<double, double> decay_window(const GridSpec& grid, const std::vector<double>& values,
                                       double lo, double hi) {
  require(grid.n == values.size(), Code::GridMismatch, "decay_window: value count");
  require(0.0 < lo && lo < hi, Code::InvalidArgument, "decay_window: need 0 < lo < hi");
  const std::size_t n = grid.n;
  std::size_t best_lo = 0, best_hi = 0;
  bool found = false;
  std::size_t i = 0;
  while (i < n) {
    if (values[i] >= lo && values[i] <= hi) {
      std::size_t j = i;
      while (j + 1 < n && values[j + 1] >= lo && values[j + 1] <= hi) ++j;
      if (!found || j >= best_hi) { // rightmost run wins
        best_lo = i;
        best_hi = j;
        found = true;
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  require(found && best_hi > best_lo + 1, Code::DomainError,
          "decay_window: no usable band inside [" + num(lo) + ", " + num(hi) + "]");
  return {grid.x(best_lo), grid.x(best_hi)};
}

std::pair<double, double> decay_window(const StatePair& state, Component component, double lo,
                                       double hi) {
  return decay_window(state.grid, component_of(state, component), lo, hi);
}

RegionReport region_check(const std::vector<StatePair>& trajectory, double s1, double s2,
                          const Equilibrium& target, double edge_margin) {
  require(!trajectory.empty(), Code::InvalidArgument, "region_check: empty trajectory");
  require(s1 < s2, Code::InvalidArgument, "region_check: need s1 < s2");
  const std::size_t n = trajectory.size();
  const std::size_t first = n - std::max<std::size_t>(1, n / 4);
  RegionReport report;
  for (std::size_t k = first; k < n; ++k) {
    const StatePair& s = trajectory[k];
    const double lo = std::max(s1 * s.time, s.grid.x_min + edge_margin);
    const double hi = std::min(s2 * s.time, s.grid.x_max - edge_margin);
    if (lo > hi) continue;
    double sup = 0.0;
    for (std::size_t i = 0; i < s.grid.n; ++i) {
      const double x = s.grid.x(i) + s.frame_speed * s.time;
      if (x < lo || x > hi) continue;
      sup = std::max(sup, std::abs(s.u[i] - target.u) + std::abs(s.v[i] - target.v));
    }
    report.times.push_back(s.time);
    report.sups.push_back(sup);
    report.sup = std::max(report.sup, sup);
  }
  require(!report.times.empty(), Code::DomainError,
          "region_check: cone empty at every examined time");
  return report;
}

ShapeLock lock_shape(const std::vector<StatePair>& trajectory, const WaveProfile& reference,
                     double speed, Component component, double window_halfwidth) {
  require(!trajectory.empty(), Code::InvalidArgument, "lock_shape: empty trajectory");
  require(window_halfwidth > 0.0, Code::InvalidArgument, "lock_shape: window width");
  const StatePair& s = trajectory.back();
  const std::vector<double>& values = component_of(s, component);
  // Speed relative to the trajectory's own frame; lab trajectories have
  // frame_speed 0 and use `speed` as given.
  const double rel = speed - s.frame_speed;
  const double c_state = find_level_crossing(s.grid, values, 0.5, true);
  const double c_ref = find_level_crossing(reference.grid, reference.values, 0.5, true);
  const double h_init = c_state - rel * s.time - c_ref;

  const double win_lo = std::max(c_state - window_halfwidth, s.grid.x_min + 5.0);
  const double win_hi = std::min(c_state + window_halfwidth, s.grid.x_max - 5.0);
  require(win_lo < win_hi, Code::DomainError, "lock_shape: empty lock window");
  const std::size_t i_lo =
      static_cast<std::size_t>(std::ceil((win_lo - s.grid.x_min) / s.grid.h() - 1e-9));
  const std::size_t i_hi =
      static_cast<std::size_t>(std::floor((win_hi - s.grid.x_min) / s.grid.h() + 1e-9));
  require(i_hi > i_lo, Code::DomainError, "lock_shape: lock window holds no nodes");

  const CubicHermite ref(reference.grid, reference.values);
  const auto sup_at = [&](double h) {
    double sup = 0.0;
    std::size_t used = 0;
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
      const double arg = s.grid.x(i) - rel * s.time - h;
      if (arg < reference.grid.x_min || arg > reference.grid.x_max) continue;
      sup = std::max(sup, std::abs(values[i] - ref(arg)));
      ++used;
    }
    if (used < 8) return std::numeric_limits<double>::infinity();
    return sup;
  };

  double best_h = h_init;
  double best = sup_at(h_init);
  const auto scan = [&](double center, double radius, double step) {
    for (double off = -radius; off <= radius + 1e-15; off += step) {
      const double h = center + off;
      const double e = sup_at(h);
      if (e < best) {
        best = e;
        best_h = h;
      }
    }
  };
  scan(h_init, 1.0, 1e-3);
  scan(best_h, 2e-3, 1e-5);
  require(std::isfinite(best), Code::DomainError, "lock_shape: reference never overlaps window");
  require(best <= 0.1, Code::NonConvergence,
          "lock_shape: poor lock, sup error " + num(best));
  ShapeLock lock;
  lock.fitted_shift = best_h;
  lock.sup_error = best;
  return lock;
}

} // namespace lvlab
