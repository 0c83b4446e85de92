#pragma once

#include <vector>

#include "lvlab/types.hpp"

namespace lvlab {

// Boundary treatment for one component at one end of the grid.
// Robin "rate" is the exponential decay rate of (w - target) toward that end's
// infinity; the outward sign is applied internally per side.
struct BcSpec {
  enum class Kind { NeumannZero, Dirichlet, Robin };
  Kind kind = Kind::NeumannZero;
  double value = 0.0;  // Dirichlet
  double rate = 0.0;   // Robin
  double target = 0.0; // Robin

  static BcSpec neumann() { return {}; }
  static BcSpec dirichlet(double v) { return {Kind::Dirichlet, v, 0.0, 0.0}; }
  static BcSpec robin(double rate, double target) {
    return {Kind::Robin, 0.0, rate, target};
  }
};

// One IMEX step: reaction explicit, diffusion + frame advection implicit with
// centered differences. Monotone (order-preserving in the competitive order)
// when dt <= 1/L and h <= 2*min(1,d)/|frame_speed|.
struct IntegratorConfig {
  double dt = 0.01;
  BcSpec u_left, u_right, v_left, v_right;
  double reaction_lipschitz_cap = 0.0; // 0: derived from the state caps

  void validate() const {
    require(dt > 0.0 && std::isfinite(dt), Code::InvalidArgument, "integrator: dt must be positive");
  }
};

// Fills u_cap/v_cap from the current profiles when unset: cap = max(1, sup).
void pin_caps(StatePair& state);

StatePair step(const StatePair& state, const IntegratorConfig& cfg, const ModelParams& params);

// Advances to t_end, landing exactly on each snapshot time; returns states at the
// snapshot times plus the final state (unduplicated if t_end is a snapshot).
std::vector<StatePair> integrate(StatePair state, const IntegratorConfig& cfg,
                                 const ModelParams& params, double t_end,
                                 const std::vector<double>& snapshot_times);

} // namespace lvlab
