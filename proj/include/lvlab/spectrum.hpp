#pragma once

#include <array>
#include <complex>
#include <vector>

#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

namespace lvlab {

// Essential-spectrum geometry of the v-linearization around the scalar wave.
// The two Fredholm boundary parabolas are traced by the tail symbols at +inf
// (potential r) and -inf (potential r(1-b)).
enum class MuRegion { Omega1, Omega2, Omega3, OnBoundary };

const char* mu_region_name(MuRegion region);

struct FredholmVerdict {
  std::complex<double> mu;
  MuRegion region = MuRegion::OnBoundary;
  int i_plus = 0;  // unstable tail dimension at +inf
  int i_minus = 0; // unstable tail dimension at -inf
  int index = 0;   // i_minus - i_plus
};

struct CharacteristicRoots {
  std::array<std::complex<double>, 2> lambda_pm;       // d s^2 + c s + (r - mu) = 0
  std::array<std::complex<double>, 2> lambda_tilde_pm; // d s^2 + c s + (r(1-b) - mu) = 0
};

CharacteristicRoots characteristic_roots(const ModelParams& p, double c,
                                         std::complex<double> mu);

FredholmVerdict classify_mu(const ModelParams& p, double c, std::complex<double> mu);

// Angle trajectory of the polar reduction of the tail ODE; positivity of the
// bounded solution is certified by forward invariance of (arctan(lambda_+), pi/2).
struct PolarTrajectory {
  std::vector<double> xi_samples;
  std::vector<double> theta;
  std::vector<double> r_log;
  double lambda_plus = 0.0;
  double theta_floor = 0.0; // arctan(lambda_plus)
  double terminal_theta = 0.0;
};

// Right-hand side of the angle equation; exposed for direct checks.
double polar_angle_rhs(const ModelParams& p, double c, double mu, double phi_value,
                       double theta);

PolarTrajectory polar_shoot(const ModelParams& p, double c, double mu,
                            const WaveProfile& phi_c, double theta0, double xi0);

} // namespace lvlab
