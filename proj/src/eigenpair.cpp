#include "lvlab/eigenpair.hpp"

#include <algorithm>
#include <cmath>

#include "lvlab/errors.hpp"
#include "lvlab/integrator.hpp"
#include "lvlab/speeds.hpp"
#include "lvlab/tridiag.hpp"

namespace lvlab {

namespace {

// Steady scalar problem kappa w'' + s w' + pot(x) w = rhs(x) on the grid,
// Robin rows eliminated with the same ghost formula the time integrator uses,
// so eigenfunctions and evolved states share one discretization exactly.
std::vector<double> solve_scalar_bvp(const GridSpec& grid, double kappa, double s,
                                     const std::vector<double>& pot,
                                     const std::vector<double>& rhs, const BcSpec& left,
                                     const BcSpec& right) {
  const std::size_t n = grid.n;
  require(pot.size() == n && rhs.size() == n, Code::InvalidArgument,
          "coefficient arrays must match the grid");
  const double h = grid.h();
  const double diff = kappa / (h * h);
  const double adv = s / (2.0 * h);

  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), b(rhs);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sub[i] = diff - adv;
    diag[i] = -2.0 * diff + pot[i];
    sup[i] = diff + adv;
  }

  switch (left.kind) {
    case BcSpec::Kind::Dirichlet:
      diag[0] = 1.0;
      sup[0] = 0.0;
      b[0] = left.value;
      break;
    case BcSpec::Kind::NeumannZero:
      diag[0] = -2.0 * diff + pot[0];
      sup[0] = 2.0 * diff;
      break;
    case BcSpec::Kind::Robin: {
      const double w = left.rate * (2.0 * kappa / h - s);
      diag[0] = -2.0 * diff - w + pot[0];
      sup[0] = 2.0 * diff;
      b[0] -= w * left.target;
      break;
    }
  }
  switch (right.kind) {
    case BcSpec::Kind::Dirichlet:
      diag[n - 1] = 1.0;
      sub[n - 1] = 0.0;
      b[n - 1] = right.value;
      break;
    case BcSpec::Kind::NeumannZero:
      diag[n - 1] = -2.0 * diff + pot[n - 1];
      sub[n - 1] = 2.0 * diff;
      break;
    case BcSpec::Kind::Robin: {
      const double w = right.rate * (2.0 * kappa / h + s);
      diag[n - 1] = -2.0 * diff - w + pot[n - 1];
      sub[n - 1] = 2.0 * diff;
      b[n - 1] -= w * right.target;
      break;
    }
  }

  BandedLU lu(n, 1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    lu.set(i, i, diag[i]);
    if (i > 0) lu.set(i, i - 1, sub[i]);
    if (i + 1 < n) lu.set(i, i + 1, sup[i]);
  }
  lu.factor();
  return lu.solve(std::move(b));
}

double interior_residual_sup(const GridSpec& grid, double kappa, double s,
                             const std::vector<double>& pot, const std::vector<double>& rhs,
                             const std::vector<double>& w) {
  const double h = grid.h();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    const double d2 = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h);
    const double d1 = (w[i + 1] - w[i - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(kappa * d2 + s * d1 + pot[i] * w[i] - rhs[i]));
  }
  return worst;
}

void require_unit_wave(const WaveProfile& wave, const GridSpec& grid) {
  require(wave.grid.same(grid), Code::GridMismatch, "wave grid does not match request");
  require(wave.d == 1.0 && wave.r == 1.0, Code::InvalidArgument,
          "wave must carry unit diffusivity and rate");
}

double delta_v_of(const ModelParams& p, double c, double mu) {
  const double rad = clamp_radicand(c * c + 4.0 * p.d * (mu + p.r * (p.b - 1.0)));
  return (std::sqrt(rad) - c) / (2.0 * p.d);
}

} // namespace

std::vector<double> solve_psi(double c, double lambda, const ModelParams& p,
                              const WaveProfile& phi_c, const GridSpec& grid) {
  p.validate();
  require_unit_wave(phi_c, grid);
  require(lambda > 0.0 && lambda < c / (2.0 * p.d), Code::DomainError,
          "lambda must lie in (0, c/(2d))");
  const double mu = g_eval(p, c, lambda);
  const double dv = delta_v_of(p, c, mu);

  const std::size_t n = grid.n;
  std::vector<double> pot(n), rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) pot[i] = p.r * (1.0 - p.b * phi_c.values[i]) - mu;
  const BcSpec left = dv > 0.0 ? BcSpec::robin(dv, 0.0) : BcSpec::neumann();
  const BcSpec right = BcSpec::dirichlet(std::exp(-lambda * grid.x_max));
  return solve_scalar_bvp(grid, p.d, c, pot, rhs, left, right);
}

std::vector<double> solve_phi(const std::vector<double>& psi, const WaveProfile& phi_c,
                              double mu, double a, const GridSpec& grid, double left_rate) {
  require_unit_wave(phi_c, grid);
  const std::size_t n = grid.n;
  require(psi.size() == n, Code::InvalidArgument, "psi must match the grid");
  require(a > 0.0 && std::isfinite(mu), Code::InvalidArgument, "bad forcing parameters");

  if (!std::isfinite(left_rate)) {
    // psi carries the left decay; recover its nodal rate from the first cell
    require(psi[0] > 0.0 && psi[1] > 0.0, Code::DomainError,
            "cannot infer a left rate from nonpositive psi");
    left_rate = std::max(0.0, std::log(psi[1] / psi[0]) / grid.h());
  }

  const double c = phi_c.speed;
  std::vector<double> pot(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    pot[i] = 1.0 - 2.0 * phi_c.values[i] - mu;
    rhs[i] = a * phi_c.values[i] * psi[i];
  }
  const BcSpec left = left_rate > 0.0 ? BcSpec::robin(left_rate, 0.0) : BcSpec::neumann();
  return solve_scalar_bvp(grid, 1.0, c, pot, rhs, left, BcSpec::dirichlet(0.0));
}

double psi_residual_sup(const std::vector<double>& psi, double c, double lambda,
                        const ModelParams& p, const WaveProfile& phi_c) {
  const std::size_t n = phi_c.grid.n;
  require(psi.size() == n, Code::InvalidArgument, "psi must match the wave grid");
  const double mu = g_eval(p, c, lambda);
  std::vector<double> pot(n), rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) pot[i] = p.r * (1.0 - p.b * phi_c.values[i]) - mu;
  return interior_residual_sup(phi_c.grid, p.d, c, pot, rhs, psi);
}

double phi_residual_sup(const std::vector<double>& phi, const std::vector<double>& psi,
                        const WaveProfile& phi_c, double mu, double a) {
  const std::size_t n = phi_c.grid.n;
  require(phi.size() == n && psi.size() == n, Code::InvalidArgument,
          "arrays must match the wave grid");
  std::vector<double> pot(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    pot[i] = 1.0 - 2.0 * phi_c.values[i] - mu;
    rhs[i] = a * phi_c.values[i] * psi[i];
  }
  return interior_residual_sup(phi_c.grid, 1.0, phi_c.speed, pot, rhs, phi);
}

EigenPair solve_eigenpair(const ModelParams& p, double c, double lambda,
                          const WaveProfile& phi_c) {
  EigenPair pair;
  pair.grid = phi_c.grid;
  pair.lambda = lambda;
  pair.mu = g_eval(p, c, lambda);
  pair.delta_v = delta_v_of(p, c, pair.mu);
  pair.psi = solve_psi(c, lambda, p, phi_c, pair.grid);
  pair.phi = solve_phi(pair.psi, phi_c, pair.mu, p.a, pair.grid, pair.delta_v);
  pair.upsilon = pair.psi.front() * std::exp(-pair.delta_v * pair.grid.x_min);
  pair.residual_psi = psi_residual_sup(pair.psi, c, lambda, p, phi_c);
  pair.residual_phi = phi_residual_sup(pair.phi, pair.psi, phi_c, pair.mu, p.a);
  return pair;
}

double PsiEnvelope::lower(double x) const {
  return std::max(0.0, std::exp(-lambda * x) - D * std::exp(-lambda_tilde * x));
}

double PsiEnvelope::upper(double x) const {
  if (x > x2) return std::exp(-lambda * x);
  return K0 * std::exp(delta_v * x) * (1.0 - std::exp(eps2 * x));
}

PsiEnvelope build_psi_envelope(double c, double lambda, const ModelParams& p,
                               const WaveProfile& phi_c) {
  p.validate();
  require_unit_wave(phi_c, phi_c.grid);
  require(phi_c.normalization == Normalization::TailAmplitudeOne, Code::InvalidArgument,
          "envelope construction expects the amplitude-one wave");
  require(c >= 2.0, Code::DomainError, "envelope construction needs c >= 2");
  require(lambda > 0.0 && lambda < c / (2.0 * p.d), Code::DomainError,
          "lambda must lie in (0, c/(2d))");
  const double mu = g_eval(p, c, lambda);
  require(mu >= p.r * std::max(0.0, 1.0 - p.b), Code::DomainError,
          "symbol value must clear the left essential threshold");

  PsiEnvelope env;
  env.c = c;
  env.lambda = lambda;
  env.delta_v = delta_v_of(p, c, mu);
  const double tau_c = slow_decay_root(1.0, 1.0, c);
  env.tau_tilde = approach_root(1.0, 1.0, c);
  env.eps2 = 0.5 * env.tau_tilde;

  // shifted comparison exponent: stays left of the symbol vertex and within
  // tau_c of lambda so the forcing tail still dominates
  env.lambda_tilde = lambda + 0.5 * std::min(tau_c, c / (2.0 * p.d) - lambda);
  const double gap = g_eval(p, c, lambda) - g_eval(p, c, env.lambda_tilde);
  require(gap > 0.0, Code::EnvelopeFailure, "comparison exponent does not lower the symbol");
  env.D = 2.0 * p.r * p.b / gap;
  env.x_zero = std::log(env.D) / (env.lambda_tilde - lambda);

  const GridSpec& grid = phi_c.grid;
  const std::size_t n = grid.n;
  const double slack = 1e-10;

  // differential surplus of the lower barrier where it is positive
  env.sub_slack_worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    if (x < env.x_zero) continue;
    const double low = env.lower(x);
    const double surplus = env.D * gap * std::exp(-env.lambda_tilde * x) -
                           p.r * p.b * phi_c.values[i] * low;
    env.sub_slack_worst = std::min(env.sub_slack_worst, surplus);
  }
  if (!std::isfinite(env.sub_slack_worst)) env.sub_slack_worst = 0.0;
  require(env.sub_slack_worst >= -slack, Code::EnvelopeFailure,
          "lower barrier loses the differential inequality");

  // left piece surplus: rb(1-Phi)(1-e^{eps2 x}) - Q e^{eps2 x} must stay <= 0
  const double s_up = env.delta_v + env.eps2;
  const double Q = p.d * s_up * s_up + c * s_up + p.r * (1.0 - p.b) - mu;
  require(Q > 0.0, Code::EnvelopeFailure, "upper barrier symbol gap is not positive");

  const double deficit_cap = 0.25 * env.tau_tilde;
  std::vector<double> surplus_left(n, 0.0);
  std::size_t first_bad = n; // nodes before this index satisfy the left-piece inequality
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const double e2x = std::exp(env.eps2 * x);
    surplus_left[i] =
        p.r * p.b * (1.0 - phi_c.values[i]) * (1.0 - e2x) - Q * e2x;
    if (first_bad == n && surplus_left[i] > slack) first_bad = i;
  }

  bool found = false;
  for (std::size_t i = first_bad; i-- > 0;) {
    const double x = grid.x(i);
    if (x >= 0.0) continue;
    if (1.0 - phi_c.values[i] >= deficit_cap) continue;
    const double k0 = std::exp(-lambda * x) / (std::exp(env.delta_v * x) * (1.0 - std::exp(env.eps2 * x)));
    const double left_slope =
        k0 * (env.delta_v * std::exp(env.delta_v * x) - s_up * std::exp(s_up * x));
    const double right_slope = -lambda * std::exp(-lambda * x);
    if (left_slope >= right_slope - slack) {
      env.x2 = x;
      env.K0 = k0;
      found = true;
      break;
    }
  }
  require(found, Code::EnvelopeFailure, "no admissible splice point for the upper barrier");

  env.super_slack_worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n && grid.x(i) <= env.x2 + 1e-12; ++i)
    env.super_slack_worst = std::max(env.super_slack_worst, surplus_left[i]);
  const double k0 = env.K0;
  env.kink_gap = k0 * (env.delta_v * std::exp(env.delta_v * env.x2) -
                       s_up * std::exp(s_up * env.x2)) +
                 lambda * std::exp(-lambda * env.x2);
  return env;
}

double psi_envelope_violation(const PsiEnvelope& env, const GridSpec& grid,
                              const std::vector<double>& psi) {
  require(psi.size() == grid.n, Code::InvalidArgument, "psi must match the grid");
  double worst = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = grid.x(i);
    worst = std::max(worst, env.lower(x) - psi[i]);
    worst = std::max(worst, psi[i] - env.upper(x));
  }
  return std::max(worst, 0.0);
}

double psi_gauge_monotonicity_defect(double delta_v, const GridSpec& grid,
                                     const std::vector<double>& psi) {
  require(psi.size() == grid.n, Code::InvalidArgument, "psi must match the grid");
  double worst = 0.0;
  double prev = psi[0] * std::exp(-delta_v * grid.x(0));
  for (std::size_t i = 1; i < psi.size(); ++i) {
    const double cur = psi[i] * std::exp(-delta_v * grid.x(i));
    worst = std::max(worst, cur - prev);
    prev = cur;
  }
  return worst;
}

VariantHat solve_variant_hat(const ModelParams& p, double c_v, const WaveProfile& psi_cv,
                             const GridSpec& grid) {
  p.validate();
  require(p.a < 1.0 && p.b > 1.0, Code::RegimeMismatch,
          "merging construction needs a < 1 < b");
  require(psi_cv.grid.same(grid), Code::GridMismatch, "wave grid does not match request");
  require(psi_cv.d == p.d && psi_cv.r == p.r, Code::InvalidArgument,
          "base wave must carry the v-equation coefficients");

  VariantHat out;
  out.grid = grid;
  out.mu_hat = 1.0 - p.a;
  out.lambda4 = merging_constants(p, c_v).lambda4;

  const std::size_t n = grid.n;
  std::vector<double> pot(n), rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    pot[i] = 1.0 - p.a * psi_cv.values[i] - out.mu_hat;
  out.phi_hat =
      solve_scalar_bvp(grid, 1.0, c_v, pot, rhs, BcSpec::neumann(),
                       BcSpec::dirichlet(std::exp(-out.lambda4 * grid.x_max)));
  out.residual_phi = interior_residual_sup(grid, 1.0, c_v, pot, rhs, out.phi_hat);

  out.upsilon_hat = out.phi_hat.front();
  out.psi_minus_inf = -p.r * p.b * out.upsilon_hat / (p.r + 1.0 - p.a);

  const double rate_left = approach_root(p.d, p.r, c_v);
  for (std::size_t i = 0; i < n; ++i) {
    pot[i] = p.r * (1.0 - 2.0 * psi_cv.values[i]) - out.mu_hat;
    rhs[i] = p.r * p.b * psi_cv.values[i] * out.phi_hat[i];
  }
  out.psi_hat = solve_scalar_bvp(grid, p.d, c_v, pot, rhs,
                                 BcSpec::robin(rate_left, out.psi_minus_inf),
                                 BcSpec::dirichlet(0.0));
  out.residual_psi = interior_residual_sup(grid, p.d, c_v, pot, rhs, out.psi_hat);
  return out;
}

VariantWeak solve_variant_weak(const ModelParams& p, double c, const WaveProfile& phi_c,
                               const GridSpec& grid) {
  p.validate();
  require(classify_regime(p) == Regime::WeakCompetition, Code::RegimeMismatch,
          "limiting construction needs weak competition");
  require_unit_wave(phi_c, grid);

  VariantWeak out;
  out.grid = grid;
  out.lambda3 = limiting_lambda3(p, c).lambda3;
  out.mu = p.r * (1.0 - p.b);
  out.psi = solve_psi(c, out.lambda3, p, phi_c, grid);
  out.upsilon = out.psi.front();
  out.phi_minus_inf = -p.a * out.upsilon / (1.0 + out.mu);

  const std::size_t n = grid.n;
  std::vector<double> pot(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    pot[i] = 1.0 - 2.0 * phi_c.values[i] - out.mu;
    rhs[i] = p.a * phi_c.values[i] * out.psi[i];
  }
  const double rate_left = approach_root(1.0, 1.0, c);
  out.phi = solve_scalar_bvp(grid, 1.0, c, pot, rhs,
                             BcSpec::robin(rate_left, out.phi_minus_inf),
                             BcSpec::dirichlet(0.0));
  out.residual_phi = interior_residual_sup(grid, 1.0, c, pot, rhs, out.phi);
  out.residual_psi = psi_residual_sup(out.psi, c, out.lambda3, p, phi_c);
  return out;
}

} // namespace lvlab
