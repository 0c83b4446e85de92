#pragma once

#include <vector>

#include "lvlab/eigenpair.hpp"
#include "lvlab/integrator.hpp"
#include "lvlab/types.hpp"
#include "lvlab/waves.hpp"

namespace lvlab {

enum class EntireKind { Divergent, Limiting, Merging };
const char* entire_kind_name(EntireKind kind);

// Amplitude gauges p(t), q(t) solving p' = mu + eps M e^p, q' = mu - eps M e^q
// with p(0) = -log(1 - eps M / mu), q(0) = -log(1 + eps M / mu), in closed form,
// and the translation r(t) aligning them: e^{p(t + r(t))} = e^{q(t)}.
struct TimeGauge {
  double mu = 0.0;
  double eps = 0.0;
  double M = 0.0;

  double k() const { return eps * M / mu; } // in (0, 1)
  double p(double t) const;                 // needs k e^{mu t} < 1
  double q(double t) const;
  double shift_r(double t) const;
};

TimeGauge make_time_gauge(double mu, double eps, double M);

struct GaugeTriple {
  double p;
  double q;
  double r_shift;
};

GaugeTriple gauge_eval(const TimeGauge& g, double t);

// |e^{p(t + r(t))} - e^{q(t)}|, identically zero in exact arithmetic.
double gauge_identity_defect(const TimeGauge& g, double t);

// Frozen ingredients of one sub/super pair: base wave state, eigen direction,
// gauge, and the boundary rows under which the discrete evolution preserves the
// sandwich exactly.
struct SandwichFamily {
  EntireKind kind = EntireKind::Divergent;
  ModelParams params;
  double frame_speed = 0.0;
  double lambda = 0.0; // construction tail exponent (lambda, lambda3, or lambda4)
  GridSpec grid;
  std::vector<double> base_u, base_v;
  std::vector<double> phi, psi;
  TimeGauge gauge;
  int shrink_count = 0; // eps halvings forced by the positivity requirement
  BcSpec u_left, u_right, v_left, v_right;

  double perturbation_sup() const; // sup_x (|phi| + |psi|)
};

// M = 256 max(||phi + a psi||, r ||b phi + psi||); eps defaults to mu/(2M) and is
// halved until the members stay inside the state box at t = 0.
SandwichFamily make_sandwich_family(EntireKind kind, const ModelParams& p,
                                    double frame_speed, const WaveProfile& base,
                                    const std::vector<double>& phi,
                                    const std::vector<double>& psi, double mu,
                                    double lambda, double eps_request = 0.0);

struct SubSuper {
  StatePair sub;
  StatePair super;
};

SubSuper build_sub_super(const SandwichFamily& family, double t);

// Convenience overload assembling the family from a solved eigenpair.
SubSuper build_sub_super(EntireKind kind, const EigenPair& pair, const WaveProfile& base,
                         const TimeGauge& g, double t, const GridSpec& grid);

// Worst violation of the differential inequalities the pair must satisfy at
// interior nodes (positive means broken): the sub member needs u_t - A_1 <= 0
// and v_t - A_2 >= 0, the super member the reverse. Time derivatives are the
// closed-form gauge derivatives, space is the integrator's centered stencil, so
// the first-order terms cancel exactly and only the sign-definite quadratic
// remainder survives.
double sandwich_inequality_violation(const SandwichFamily& family, double t,
                                     bool sub_side = true, bool super_side = true);

struct EntireRun {
  SandwichFamily family;
  std::vector<double> start_times;
  double t_end = 0.0;
  double dt = 0.0;
  std::vector<double> gaps;          // sup gap between upper and lower states at t_end, per rung
  std::vector<double> chain_defects; // worst K-order defect between consecutive rungs
  double sandwich_worst = 0.0;       // worst K-order defect of the sandwich over snapshots
  std::vector<double> snapshot_times;
  std::vector<StatePair> lower_snapshots;
  std::vector<StatePair> upper_snapshots;
  StatePair lower_end;
  StatePair upper_end;
  StatePair solution; // midpoint of the deepest rung at t_end
};

// Evolves sandwich data from each start time to t_end in the co-moving frame,
// checking the monotone chain between rungs (tol 1e-7) and the sandwich at whole-
// number snapshot times; converged when the deepest gap at t_end is below 1e-5.
EntireRun backward_construct(EntireKind kind, const ModelParams& p, double c,
                             double lambda, double eps_request, const GridSpec& grid,
                             const std::vector<double>& start_times, double t_end = 0.0);

// Embeds the converged state into a lab-frame grid (exponential tail continuation
// on each side) and integrates forward, returning snapshots every snapshot_dt.
std::vector<StatePair> forward_extend(const EntireRun& run, double t_forward,
                                      const GridSpec& lab_grid, double snapshot_dt = 1.0,
                                      double dt = 0.005);

struct BistableEnvelope {
  ModelParams params;
  SystemWave wave; // the bistable connection
  double delta1 = 0.0;
  double P0 = 0.0;
  double Q0 = 0.0;
  double xi0 = 0.0;
  double shift = 0.0; // profile shift locking the envelope to the trajectory
};

// (u_bar, v_under)(t, x) = (max{0, phi_uv(x - C t - shift - xi(t)) - Q(t)},
//                           min{1, psi_uv(x - C t - shift - xi(t)) + P(t)})
// with xi, P, Q all proportional to e^{-delta1 t}.
StatePair bistable_envelope_eval(const BistableEnvelope& env, double t,
                                 const GridSpec& grid);

// Smallest delta1 from {0.05, 0.1, 0.2, 0.4} for which the trajectory snapshots
// with time >= t_from stay K-below the envelope within tol on the cone
// c_sharp*t <= x <= c_hat*t (interface-straddling speeds). The trajectory is
// reflected first: the wave rises from e2 to e1, while the forward runs from the
// backward construction have u winning on the left.
BistableEnvelope fit_bistable_envelope(const ModelParams& p, const SystemWave& wave,
                                       const std::vector<StatePair>& trajectory,
                                       double t_from, double c_sharp, double c_hat,
                                       double tol = 1e-3, double P0 = 1e-3,
                                       double Q0 = 1e-3, double xi0 = -10.0);

} // namespace lvlab
