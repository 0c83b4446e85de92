#pragma once

#include <limits>
#include <vector>

#include "lvlab/types.hpp"

namespace lvlab {

enum class Normalization {
  HalfAtZero,      // value 1/2 attained at x = 0
  TailAmplitudeOne // right tail matches e^{-tau x} with unit prefactor
};

// Fitted tail/approach diagnostics; NaN marks "not fitted".
struct DecayMeta {
  double tau = std::numeric_limits<double>::quiet_NaN();        // right-tail decay rate
  double tau_tilde = std::numeric_limits<double>::quiet_NaN();  // left approach rate
  double tail_prefactor = std::numeric_limits<double>::quiet_NaN();
  double M_c = std::numeric_limits<double>::quiet_NaN(); // lower-envelope constant
  double x_c = std::numeric_limits<double>::quiet_NaN(); // where the envelope takes over
  double K_c = std::numeric_limits<double>::quiet_NaN(); // dominance constant vs another wave
  double x_tilde_c = std::numeric_limits<double>::quiet_NaN(); // left fit window edge
  double M_tilde_c = std::numeric_limits<double>::quiet_NaN(); // left approach prefactor
};

struct WaveProfile {
  GridSpec grid;
  std::vector<double> values;
  double speed = 0.0;
  double d = 1.0;
  double r = 1.0;
  Normalization normalization = Normalization::HalfAtZero;
  double residual_sup = 0.0; // sup |discrete ODE| over interior nodes
  DecayMeta decay;
};

// Monotone front of d w'' + c w' + r w (1 - w) = 0 with w(-inf) = 1, w(+inf) = 0.
// The right boundary pins the linearized tail amplitude (Dirichlet datum on the
// exact exponential); the left boundary is the linearized approach relation
// w' = tau_tilde (w - 1). Newton with damping; continuation from larger c on failure.
WaveProfile solve_kpp_wave(double c, double d, double r, const GridSpec& grid,
                           Normalization normalization = Normalization::HalfAtZero);

// Domain wide enough that the tail datum e^{-tau x_max} < 1e-10 and the left
// approach deficit is comparably resolved; bounds are multiples of h around 0.
GridSpec suggest_wave_grid(double c, double d, double r, double h);

// Sup of the discrete wave-equation residual over interior nodes.
double kpp_residual_sup(const WaveProfile& w);

// Exact grid-relabel form of the scaling Psi_c(x) = Phi_{c/sqrt(rd)}(sqrt(r/d) x):
// same node values on the stretched grid, speed multiplied by sqrt(rd).
WaveProfile rescale_wave(const WaveProfile& phi, double d, double r);
// Same map followed by cubic resampling onto the requested grid.
WaveProfile rescale_wave(const WaveProfile& phi, double d, double r, const GridSpec& target);

// sup over shared nodes of numer/denom (the dominance constant between two waves).
double tail_dominance(const WaveProfile& numer, const WaveProfile& denom);

enum class EquilibriumTag { Zero, E1, E2, EStar };

Equilibrium equilibrium_value(EquilibriumTag tag, const ModelParams& p);
const char* equilibrium_name(EquilibriumTag tag);

struct SystemWave {
  GridSpec grid;
  std::vector<double> u;
  std::vector<double> v;
  double speed = 0.0;
  EquilibriumTag left = EquilibriumTag::E2;
  EquilibriumTag right = EquilibriumTag::E1;
  double residual_sup = 0.0;
};

// Bistable connection from e2 (left) to e1 (right) with the speed as an extra
// unknown and phase condition u(0) = 1/2. Grid must contain x = 0 as a node.
SystemWave solve_bistable_wave(const ModelParams& params, const GridSpec& grid);

struct SpeedEstimate {
  double speed = 0.0;
  double ci_halfwidth = 0.0; // 95% interval from the regression
  double drift = 0.0;        // relative speed change over the last quarter
  std::size_t samples = 0;
};

// Spreading speed from step-like initial data joining the two equilibria,
// fitted over the last half of the tracked front positions.
SpeedEstimate estimate_minimal_speed(const ModelParams& params, EquilibriumTag left,
                                     EquilibriumTag right, double t_budget);

} // namespace lvlab
