#include "lvlab/speeds.hpp"

#include <algorithm>
#include <cmath>

namespace lvlab {

double g_eval(const ModelParams& p, double c, double lambda) {
  p.validate();
  return p.d * lambda * lambda - c * lambda + p.r;
}

double clamp_radicand(double x) {
  if (x < -1e-14) fail(Code::DomainError, "negative radicand");
  return std::max(x, 0.0);
}

double slow_decay_root(double d, double r, double c) {
  const double s = std::sqrt(clamp_radicand(c * c - 4.0 * d * r));
  return 2.0 * r / (c + s);
}

double approach_root(double d, double r, double c) {
  const double s = std::sqrt(c * c + 4.0 * d * r);
  return 2.0 * r / (c + s);
}

double admissible_lambda_upper(const ModelParams& p, double c) {
  p.validate();
  const double k = p.r * std::min(p.b, 1.0);
  require(c * c - 4.0 * p.d * k >= -1e-14, Code::DomainError,
          "admissible_lambda_upper: speed below admissibility threshold");
  return slow_decay_root(p.d, k, c);
}

SpeedTable speed_table(const ModelParams& p, double c, double lambda,
                       const ExternalSpeeds& external) {
  p.validate();
  require(std::isfinite(c) && std::isfinite(lambda), Code::InvalidArgument,
          "speed_table: nonfinite input");
  require(lambda > 0.0 && lambda < std::sqrt(p.r / p.d), Code::DomainError,
          "speed_table: lambda outside (0, sqrt(r/d))");

  SpeedTable t;
  t.c = c;
  t.lambda = lambda;
  t.external = external;
  t.mu = g_eval(p, c, lambda);
  t.c_v = p.d * lambda + p.r / lambda;
  t.tau_tilde_c = approach_root(1.0, 1.0, c);
  if (c >= 2.0) t.tau_c = slow_decay_root(1.0, 1.0, c);

  const double rad_dv = c * c + 4.0 * p.d * (t.mu + p.r * (p.b - 1.0));
  if (rad_dv >= -1e-14) {
    t.delta_v = (std::sqrt(clamp_radicand(rad_dv)) - c) / (2.0 * p.d);
  }

  if (p.a < 1.0 && t.tau_c) {
    const double w = t.c_v - 2.0 * *t.tau_c;
    const double la = 0.5 * (t.c_v - std::sqrt(w * w + 4.0 * p.a));
    t.lambda_acc = la;
    const double s1a = std::sqrt(1.0 - p.a);
    if (la > 0.0 && la <= s1a) {
      t.c_acc = la + (1.0 - p.a) / la;
    } else if (la > 0.0) {
      t.c_acc = 2.0 * s1a;
    }
  }

  if (p.a < 1.0 && p.b < 1.0 && t.delta_v) {
    t.lambda_tilde = std::min(std::sqrt(p.r * (1.0 - p.b) / p.d), *t.delta_v);
    if (external.C2_star && *t.lambda_tilde > 0.0) {
      t.c_v_tilde = std::max(*external.C2_star,
                             p.d * *t.lambda_tilde + p.r * (1.0 - p.b) / *t.lambda_tilde);
    }
  }

  if (t.c_acc && external.C1_star) t.c_u1 = std::max(*external.C1_star, *t.c_acc);
  if (t.c_acc && external.C1) t.c_u2 = std::max(*external.C1, *t.c_acc);
  return t;
}

LimitingConstants limiting_lambda3(const ModelParams& p, double c) {
  p.validate();
  require(p.a > 0.0 && p.a < 1.0 && p.b > 0.0 && p.b < 1.0, Code::DomainError,
          "limiting_lambda3: needs weak competition");
  require(c > 2.0 * std::max(1.0, std::sqrt(p.d * p.r * p.b)), Code::DomainError,
          "limiting_lambda3: speed below admissibility threshold");
  const double l3 = slow_decay_root(p.d, p.r * p.b, c);
  require(l3 > 0.0 && l3 < std::sqrt(p.r / p.d), Code::Internal,
          "limiting_lambda3: exponent left its guaranteed range");
  return {l3, p.d * l3 + p.r / l3};
}

MergingConstants merging_constants(const ModelParams& p, double c_v) {
  p.validate();
  require(p.a < 1.0 && p.b > 1.0, Code::DomainError, "merging_constants: needs a < 1 < b");
  require(c_v > 2.0 * std::max(std::sqrt(p.r * p.d), std::sqrt(p.a)), Code::DomainError,
          "merging_constants: c_v below admissibility threshold");
  const double s = std::sqrt(clamp_radicand(c_v * c_v - 4.0 * p.a));
  const double l4 = 2.0 * p.a / (c_v + s);
  const double c_u3 = l4 + 1.0 / l4;
  // gap identity: c_u3 - c_v = (1-a)/(2a) (c_v + sqrt(c_v^2 - 4a))
  const double gap = (1.0 - p.a) / (2.0 * p.a) * (c_v + s);
  require(std::abs((c_u3 - c_v) - gap) <= 1e-12 * std::max(1.0, std::abs(c_u3)), Code::Internal,
          "merging_constants: gap identity failed");
  require(l4 < 1.0, Code::Internal, "merging_constants: lambda4 not below 1");
  return {l4, c_u3};
}

} // namespace lvlab
