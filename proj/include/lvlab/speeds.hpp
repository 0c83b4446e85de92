#pragma once

#include <optional>

#include "lvlab/types.hpp"

namespace lvlab {

// Quadratic symbol of the v-equation tail operator: g(lambda) = d lambda^2 - c lambda + r.
double g_eval(const ModelParams& p, double c, double lambda);

// Guards a radicand against tiny negative round-off; genuinely negative values throw.
double clamp_radicand(double x);

// Smaller positive root of d s^2 - c s + r = 0, computed without cancellation.
// Requires c >= 2 sqrt(d r) up to the radicand guard.
double slow_decay_root(double d, double r, double c);

// Positive root of d s^2 + c s - r = 0; always defined.
double approach_root(double d, double r, double c);

// Largest admissible tail exponent: (c - sqrt(c^2 - 4 d r min{b,1})) / (2d).
double admissible_lambda_upper(const ModelParams& p, double c);

// Minimal/unique wave speeds measured elsewhere; inputs to the compound bounds.
struct ExternalSpeeds {
  std::optional<double> C1;      // minimal speed over the (e1, e2) boundary pair
  std::optional<double> C1_star; // minimal speed over the (e_star, e2) pair
  std::optional<double> C2_star; // minimal speed over the (e_star, e1) pair
  std::optional<double> C_uv;    // unique bistable connection speed
};

struct SpeedTable {
  double c = 0.0;
  double lambda = 0.0;
  double mu = 0.0;  // g(lambda) = lambda (c_v - c)
  double c_v = 0.0; // d lambda + r / lambda
  double tau_tilde_c = 0.0;
  std::optional<double> tau_c;        // needs c >= 2
  std::optional<double> delta_v;      // needs c^2 + 4d(mu + r(b-1)) >= 0
  std::optional<double> lambda_acc;   // needs a < 1 and tau_c
  std::optional<double> c_acc;        // piecewise rule on lambda_acc
  std::optional<double> lambda_tilde; // weak competition only
  std::optional<double> c_v_tilde;    // needs lambda_tilde and C2_star
  std::optional<double> c_u1;         // max(C1_star, c_acc)
  std::optional<double> c_u2;         // max(C1, c_acc)
  ExternalSpeeds external;
};

// Fills every formula-defined field reachable from (params, c, lambda); fields whose
// preconditions fail stay empty. Pure and deterministic.
SpeedTable speed_table(const ModelParams& p, double c, double lambda,
                       const ExternalSpeeds& external = {});

struct LimitingConstants {
  double lambda3;
  double c_v3;
};

// Tail exponent lambda3 = (c - sqrt(c^2 - 4 d r b)) / (2d) of the limiting weak-competition
// construction and the induced v-frame speed c_v3 = d lambda3 + r / lambda3.
LimitingConstants limiting_lambda3(const ModelParams& p, double c);

struct MergingConstants {
  double lambda4;
  double c_u3;
};

// Exponent lambda4 = (c_v - sqrt(c_v^2 - 4a)) / 2 of the merging construction and the
// induced u-frame speed c_u3 = lambda4 + 1/lambda4.
MergingConstants merging_constants(const ModelParams& p, double c_v);

} // namespace lvlab
