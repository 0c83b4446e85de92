#include "lvlab/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "lvlab/errors.hpp"
#include "lvlab/interp.hpp"

namespace lvlab {

namespace {

constexpr double kBoundaryTol = 1e-12;

std::array<std::complex<double>, 2> quadratic_roots(double d, double c,
                                                    std::complex<double> constant) {
  // d s^2 + c s + constant = 0; [0] carries the +sqrt branch
  const std::complex<double> disc = c * c - 4.0 * d * constant;
  const std::complex<double> sq = std::sqrt(disc);
  return {(-c + sq) / (2.0 * d), (-c - sq) / (2.0 * d)};
}

} // namespace

const char* mu_region_name(MuRegion region) {
  switch (region) {
    case MuRegion::Omega1: return "omega1";
    case MuRegion::Omega2: return "omega2";
    case MuRegion::Omega3: return "omega3";
    case MuRegion::OnBoundary: return "on_boundary";
  }
  return "unknown";
}

CharacteristicRoots characteristic_roots(const ModelParams& p, double c,
                                         std::complex<double> mu) {
  p.validate();
  require(c > 0.0 && std::isfinite(c), Code::InvalidArgument, "speed must be positive");
  CharacteristicRoots roots;
  roots.lambda_pm = quadratic_roots(p.d, c, std::complex<double>(p.r, 0.0) - mu);
  roots.lambda_tilde_pm =
      quadratic_roots(p.d, c, std::complex<double>(p.r * (1.0 - p.b), 0.0) - mu);
  return roots;
}

FredholmVerdict classify_mu(const ModelParams& p, double c, std::complex<double> mu) {
  p.validate();
  require(c > 0.0 && std::isfinite(c), Code::InvalidArgument, "speed must be positive");
  FredholmVerdict v;
  v.mu = mu;
  const double alpha = mu.real();
  const double beta = mu.imag();
  const double bend = p.d * (beta / c) * (beta / c);
  const double gamma_plus = p.r - bend;
  const double gamma_minus = p.r * (1.0 - p.b) - bend;

  if (std::abs(alpha - gamma_plus) <= kBoundaryTol ||
      std::abs(alpha - gamma_minus) <= kBoundaryTol) {
    v.region = MuRegion::OnBoundary;
    return v;
  }
  if (alpha > gamma_plus) {
    v.region = MuRegion::Omega1;
  } else if (alpha < gamma_minus) {
    v.region = MuRegion::Omega2;
  } else {
    v.region = MuRegion::Omega3;
  }
  v.i_plus = v.region == MuRegion::Omega1 ? 1 : 0;
  v.i_minus = (v.region == MuRegion::Omega1 || v.region == MuRegion::Omega3) ? 1 : 0;
  v.index = v.i_minus - v.i_plus;
  return v;
}

double polar_angle_rhs(const ModelParams& p, double c, double mu, double phi_value,
                       double theta) {
  const double pot = p.r * (1.0 - p.b * phi_value);
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  return -sn * sn - (c / p.d) * sn * cs - ((pot - mu) / p.d) * cs * cs;
}

namespace {

struct PolarRhs {
  const ModelParams& p;
  double c;
  double mu;
  const CubicHermite& wave;
  double x_lo, x_hi;

  void operator()(double xi, const double y[2], double dy[2]) const {
    const double clipped = std::min(std::max(xi, x_lo), x_hi);
    const double phi = wave(clipped);
    const double theta = y[0];
    dy[0] = polar_angle_rhs(p, c, mu, phi, theta);
    const double pot = p.r * (1.0 - p.b * phi);
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    dy[1] = ((1.0 + (mu - pot) / p.d) * cs - (c / p.d) * sn) * sn;
  }
};

} // namespace

PolarTrajectory polar_shoot(const ModelParams& p, double c, double mu,
                            const WaveProfile& phi_c, double theta0, double xi0) {
  p.validate();
  require(std::isfinite(mu), Code::InvalidArgument, "mu must be finite");
  const double lower_edge = std::max(p.r * (1.0 - p.b), p.r - c * c / (4.0 * p.d));
  require(mu > lower_edge && mu < p.r, Code::DomainError,
          "mu must lie strictly between the tail thresholds");

  PolarTrajectory out;
  const double disc = c * c - 4.0 * p.d * (p.r - mu);
  require(disc > 0.0, Code::DomainError, "tail roots must be real");
  out.lambda_plus = (-c + std::sqrt(disc)) / (2.0 * p.d);
  out.theta_floor = std::atan(out.lambda_plus);
  const double pi_half = std::asin(1.0);
  require(theta0 > out.theta_floor && theta0 < pi_half, Code::DomainError,
          "initial angle must lie in (arctan(lambda_plus), pi/2)");
  require(xi0 >= phi_c.grid.x_min && xi0 < phi_c.grid.x_max, Code::DomainError,
          "start point must lie inside the wave grid");

  CubicHermite wave(phi_c.grid, phi_c.values);
  PolarRhs rhs{p, c, mu, wave, phi_c.grid.x_min, phi_c.grid.x_max};

  // Dormand-Prince 5(4) with standard coefficients
  static const double A[7][6] = {
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double C[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double B5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84, 0};
  static const double B4[7] = {5179.0 / 57600,    0,           7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  const double tol = 1e-10;
  const double xi_end = phi_c.grid.x_max;
  double xi = xi0;
  double y[2] = {theta0, 0.0};
  double h = 1e-3;
  const double h_max = 0.25;

  auto record = [&](double where) {
    out.xi_samples.push_back(where);
    out.theta.push_back(y[0]);
    out.r_log.push_back(y[1]);
  };
  auto check_invariance = [&](double theta) {
    require(theta >= out.theta_floor - 1e-9 && theta <= pi_half + 1e-9,
            Code::StabilityViolation, "angle left the invariant interval");
  };
  record(xi);

  double k[7][2];
  std::size_t steps = 0;
  while (xi < xi_end - 1e-14) {
    require(++steps < 2000000, Code::NonConvergence, "angle integration stalled");
    h = std::min({h, h_max, xi_end - xi});
    double ys[2];
    rhs(xi, y, k[0]);
    for (int s = 1; s < 7; ++s) {
      for (int j = 0; j < 2; ++j) {
        double acc = 0.0;
        for (int q = 0; q < s; ++q) acc += A[s][q] * k[q][j];
        ys[j] = y[j] + h * acc;
      }
      rhs(xi + C[s] * h, ys, k[s]);
    }
    double y5[2], err = 0.0;
    for (int j = 0; j < 2; ++j) {
      double acc5 = 0.0, acc4 = 0.0;
      for (int s = 0; s < 7; ++s) {
        acc5 += B5[s] * k[s][j];
        acc4 += B4[s] * k[s][j];
      }
      y5[j] = y[j] + h * acc5;
      const double scale = tol + tol * std::max(std::abs(y[j]), std::abs(y5[j]));
      err = std::max(err, std::abs(h * (acc5 - acc4)) / scale);
    }
    if (err <= 1.0) {
      xi += h;
      y[0] = y5[0];
      y[1] = y5[1];
      check_invariance(y[0]);
      record(xi);
    }
    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, grow));
    require(h > 1e-12, Code::NonConvergence, "angle integration step underflow");
  }

  const std::size_t m = out.theta.size();
  const std::size_t tail = std::max<std::size_t>(1, m / 20);
  double acc = 0.0;
  for (std::size_t i = m - tail; i < m; ++i) acc += out.theta[i];
  out.terminal_theta = acc / static_cast<double>(tail);
  return out;
}

} // namespace lvlab
