#pragma once

#include <limits>
#include <vector>

#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

namespace lvlab {

// Linearized pair (phi, psi) riding on the scalar wave Phi_c: psi solves the
// self-contained v-equation at rate mu = g(lambda) with right tail e^{-lambda x}
// (amplitude 1) and left decay rate delta_v; phi solves the u-equation forced
// by -a Phi_c psi, vanishing at +inf faster than Phi_c.
struct EigenPair {
  GridSpec grid;
  std::vector<double> phi; // <= 0
  std::vector<double> psi; // >= 0
  double mu = 0.0;
  double lambda = 0.0;
  double delta_v = 0.0;
  double upsilon = 0.0; // left-limit scale of e^{-delta_v x} psi
  double residual_phi = 0.0;
  double residual_psi = 0.0;
};

std::vector<double> solve_psi(double c, double lambda, const ModelParams& p,
                              const WaveProfile& phi_c, const GridSpec& grid);

// Forced u-component; left_rate is the exponential rate of the left Robin row
// (taken from the first two psi nodes when NaN).
std::vector<double> solve_phi(const std::vector<double>& psi, const WaveProfile& phi_c,
                              double mu, double a, const GridSpec& grid,
                              double left_rate = std::numeric_limits<double>::quiet_NaN());

EigenPair solve_eigenpair(const ModelParams& p, double c, double lambda,
                          const WaveProfile& phi_c);

double psi_residual_sup(const std::vector<double>& psi, double c, double lambda,
                        const ModelParams& p, const WaveProfile& phi_c);
double phi_residual_sup(const std::vector<double>& phi, const std::vector<double>& psi,
                        const WaveProfile& phi_c, double mu, double a);

// Two-sided envelope for psi:
//   lower(x) = max(0, e^{-lambda x} - D e^{-lambda_tilde x})
//   upper(x) = K0 e^{delta_v x}(1 - e^{eps2 x}) for x <= x2, e^{-lambda x} beyond.
// Construction succeeds only when the closed-form side conditions hold on the grid.
struct PsiEnvelope {
  double c = 0.0, lambda = 0.0;
  double lambda_tilde = 0.0;
  double D = 0.0;
  double eps2 = 0.0;
  double x_zero = 0.0; // where the lower bound becomes positive
  double x2 = 0.0;     // splice point of the upper bound
  double K0 = 0.0;
  double delta_v = 0.0;
  double tau_tilde = 0.0;
  // diagnostics of the analytic differential inequalities (signed slacks)
  double sub_slack_worst = 0.0;   // min of the sub-solution surplus, want >= -1e-10
  double super_slack_worst = 0.0; // max of the super-solution surplus, want <= 1e-10
  double kink_gap = 0.0;          // left minus right slope at x2, want >= -1e-10

  double lower(double x) const;
  double upper(double x) const;
};

PsiEnvelope build_psi_envelope(double c, double lambda, const ModelParams& p,
                               const WaveProfile& phi_c);

// Largest one-sided excursion of psi outside [lower, upper] over the grid.
double psi_envelope_violation(const PsiEnvelope& env, const GridSpec& grid,
                              const std::vector<double>& psi);

// Largest increase of consecutive values of e^{-delta_v x} psi (0 when nonincreasing).
double psi_gauge_monotonicity_defect(double delta_v, const GridSpec& grid,
                                     const std::vector<double>& psi);

// Eigenpair of the merging construction riding on the v-wave Psi_{c_v}:
// phi_hat > 0 self-contained with rate mu_hat = 1 - a and right tail e^{-lambda4 x};
// psi_hat < 0 forced by -r b Psi phi_hat, approaching psi_minus_inf < 0 on the left
// and vanishing at +inf faster than Psi.
struct VariantHat {
  GridSpec grid;
  std::vector<double> phi_hat;
  std::vector<double> psi_hat;
  double mu_hat = 0.0;
  double lambda4 = 0.0;
  double upsilon_hat = 0.0;   // left limit of phi_hat
  double psi_minus_inf = 0.0; // -r b upsilon_hat / (r + 1 - a)
  double residual_phi = 0.0;
  double residual_psi = 0.0;
};

VariantHat solve_variant_hat(const ModelParams& p, double c_v, const WaveProfile& psi_cv,
                             const GridSpec& grid);

// Eigenpair of the limiting weak-competition construction at lambda = lambda3:
// mu = r(1-b), delta_v = 0, psi tends to upsilon > 0 on the left; phi is forced
// and approaches phi_minus_inf = -a upsilon / (1 + r(1-b)).
struct VariantWeak {
  GridSpec grid;
  std::vector<double> phi;
  std::vector<double> psi;
  double mu = 0.0;
  double lambda3 = 0.0;
  double upsilon = 0.0;
  double phi_minus_inf = 0.0;
  double residual_phi = 0.0;
  double residual_psi = 0.0;
};

VariantWeak solve_variant_weak(const ModelParams& p, double c, const WaveProfile& phi_c,
                               const GridSpec& grid);

} // namespace lvlab
