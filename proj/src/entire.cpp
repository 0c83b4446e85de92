#include "lvlab/entire.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lvlab/interp.hpp"
#include "lvlab/speeds.hpp"

namespace lvlab {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

} // namespace

const char* entire_kind_name(EntireKind kind) {
  switch (kind) {
    case EntireKind::Divergent: return "divergent";
    case EntireKind::Limiting: return "limiting";
    case EntireKind::Merging: return "merging";
  }
  return "unknown";
}

double TimeGauge::p(double t) const {
  const double z = k() * std::exp(mu * t);
  require(z < 1.0, Code::DomainError, "gauge: p(t) undefined, eps*M*exp(mu t) >= mu");
  return mu * t - std::log1p(-z);
}

double TimeGauge::q(double t) const { return mu * t - std::log1p(k() * std::exp(mu * t)); }

double TimeGauge::shift_r(double t) const {
  return -std::log1p(2.0 * k() * std::exp(mu * t)) / mu;
}

TimeGauge make_time_gauge(double mu, double eps, double M) {
  require(std::isfinite(mu) && mu > 0.0, Code::InvalidArgument, "gauge: mu must be positive");
  require(std::isfinite(M) && M > 0.0, Code::InvalidArgument, "gauge: M must be positive");
  require(std::isfinite(eps) && eps > 0.0 && eps * M < mu, Code::InvalidArgument,
          "gauge: eps must lie in (0, mu/M)");
  return TimeGauge{mu, eps, M};
}

GaugeTriple gauge_eval(const TimeGauge& g, double t) {
  return GaugeTriple{g.p(t), g.q(t), g.shift_r(t)};
}

double gauge_identity_defect(const TimeGauge& g, double t) {
  return std::abs(std::exp(g.p(t + g.shift_r(t))) - std::exp(g.q(t)));
}

double SandwichFamily::perturbation_sup() const {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) m = std::max(m, std::abs(phi[i]) + std::abs(psi[i]));
  return m;
}

namespace {

StatePair assemble_member(const SandwichFamily& f, double amplitude, double t) {
  StatePair s;
  s.grid = f.grid;
  s.u.resize(f.grid.n);
  s.v.resize(f.grid.n);
  for (std::size_t i = 0; i < f.grid.n; ++i) {
    s.u[i] = f.base_u[i] + amplitude * f.phi[i];
    s.v[i] = f.base_v[i] + amplitude * f.psi[i];
  }
  s.frame_speed = f.frame_speed;
  s.time = t;
  s.u_cap = 1.0;
  s.v_cap = 1.0;
  return s;
}

SubSuper evaluate_pair(const SandwichFamily& f, double t) {
  const double ep = f.gauge.eps * std::exp(f.gauge.p(t));
  const double eq = f.gauge.eps * std::exp(f.gauge.q(t));
  const bool sub_takes_p = f.kind != EntireKind::Merging;
  SubSuper out;
  out.sub = assemble_member(f, sub_takes_p ? ep : eq, t);
  out.super = assemble_member(f, sub_takes_p ? eq : ep, t);
  return out;
}

// Remark-level positivity at the gauge maximum t = 0: every member stays inside
// the open box (u > 0 strictly where it matters, v < 1, and for a v-carrying base
// the perturbed v stays positive).
bool members_inside_box(const SandwichFamily& f) {
  const SubSuper ss = evaluate_pair(f, 0.0);
  const std::size_t n = f.grid.n;
  if (f.kind == EntireKind::Merging) {
    for (std::size_t i = 0; i < n; ++i) {
      if (ss.super.v[i] <= 0.0) return false;
      if (ss.super.u[i] >= 1.0) return false;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (ss.sub.u[i] <= 0.0) return false;
      if (ss.sub.v[i] >= 1.0) return false;
    }
  }
  return true;
}

double tail_rate_u_right(const SandwichFamily& f) {
  switch (f.kind) {
    case EntireKind::Divergent:
    case EntireKind::Limiting:
      return slow_decay_root(1.0, 1.0, f.frame_speed);
    case EntireKind::Merging:
      return f.lambda; // lambda_4 forcing rate
  }
  return 0.0;
}

double tail_rate_v_right(const SandwichFamily& f) {
  if (f.kind == EntireKind::Merging)
    return slow_decay_root(f.params.d, f.params.r, f.frame_speed);
  return f.lambda;
}

double left_rate_v(const SandwichFamily& f) {
  if (f.kind != EntireKind::Divergent) return 0.0;
  const ModelParams& p = f.params;
  const double c = f.frame_speed;
  const double rad = clamp_radicand(c * c + 4.0 * p.d * (f.gauge.mu + p.r * (p.b - 1.0)));
  return (std::sqrt(rad) - c) / (2.0 * p.d); // delta_v
}

} // namespace

SandwichFamily make_sandwich_family(EntireKind kind, const ModelParams& p,
                                    double frame_speed, const WaveProfile& base,
                                    const std::vector<double>& phi,
                                    const std::vector<double>& psi, double mu,
                                    double lambda, double eps_request) {
  p.validate();
  base.grid.validate();
  require(phi.size() == base.grid.n && psi.size() == base.grid.n, Code::GridMismatch,
          "sandwich: eigen components do not match the wave grid");
  require(std::isfinite(mu) && mu > 0.0, Code::InvalidArgument,
          "sandwich: temporal rate mu must be positive");
  require(std::isfinite(lambda) && lambda > 0.0, Code::InvalidArgument,
          "sandwich: tail exponent must be positive");

  // sign structure: the u-perturbation lowers u and the v-perturbation raises v
  // (reversed for the merging pair built over the v-wave)
  const double sign_tol = 1e-10;
  for (std::size_t i = 0; i < base.grid.n; ++i) {
    const bool ok = kind == EntireKind::Merging
                        ? (phi[i] >= -sign_tol && psi[i] <= sign_tol)
                        : (phi[i] <= sign_tol && psi[i] >= -sign_tol);
    require(ok, Code::InvalidArgument, "sandwich: eigen component signs are wrong for this type");
  }

  SandwichFamily f;
  f.kind = kind;
  f.params = p;
  f.frame_speed = frame_speed;
  f.lambda = lambda;
  f.grid = base.grid;
  if (kind == EntireKind::Merging) {
    require(base.d == p.d && base.r == p.r, Code::InvalidArgument,
            "sandwich: merging base wave must use the v-equation coefficients");
    f.base_u.assign(base.grid.n, 0.0);
    f.base_v = base.values;
  } else {
    require(base.d == 1.0 && base.r == 1.0, Code::InvalidArgument,
            "sandwich: base wave must solve the u-equation");
    f.base_u = base.values;
    f.base_v.assign(base.grid.n, 0.0);
  }
  f.phi = phi;
  f.psi = psi;

  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < base.grid.n; ++i) {
    m1 = std::max(m1, std::abs(phi[i] + p.a * psi[i]));
    m2 = std::max(m2, p.r * std::abs(p.b * phi[i] + psi[i]));
  }
  const double M = 256.0 * std::max(m1, m2);
  require(M > 0.0, Code::InvalidArgument, "sandwich: eigen components vanish");

  double eps = eps_request > 0.0 ? eps_request : 0.5 * mu / M;
  require(eps * M < mu, Code::InvalidArgument, "sandwich: eps must lie in (0, mu/M)");
  f.gauge = make_time_gauge(mu, eps, M);

  int shrinks = 0;
  while (!members_inside_box(f)) {
    if (++shrinks > 60) fail(Code::PositivityFailure, "sandwich: no eps keeps the members positive");
    eps *= 0.5;
    f.gauge = make_time_gauge(mu, eps, M);
  }
  f.shrink_count = shrinks;

  switch (kind) {
    case EntireKind::Divergent: {
      const double dv = left_rate_v(f);
      f.u_left = dv > 0.0 ? BcSpec::robin(dv, f.base_u.front()) : BcSpec::neumann();
      f.u_right = BcSpec::dirichlet(f.base_u.back());
      f.v_left = dv > 0.0 ? BcSpec::robin(dv, 0.0) : BcSpec::neumann();
      f.v_right = BcSpec::robin(lambda, 0.0);
      break;
    }
    case EntireKind::Limiting:
      f.u_left = BcSpec::neumann();
      f.u_right = BcSpec::dirichlet(f.base_u.back());
      f.v_left = BcSpec::neumann();
      f.v_right = BcSpec::robin(lambda, 0.0);
      break;
    case EntireKind::Merging:
      f.u_left = BcSpec::neumann();
      f.u_right = BcSpec::robin(lambda, 0.0);
      f.v_left = BcSpec::neumann();
      f.v_right = BcSpec::robin(tail_rate_v_right(f), 0.0);
      break;
  }
  return f;
}

SubSuper build_sub_super(const SandwichFamily& family, double t) {
  return evaluate_pair(family, t);
}

SubSuper build_sub_super(EntireKind kind, const EigenPair& pair, const WaveProfile& base,
                         const TimeGauge& g, double t, const GridSpec& grid) {
  require(grid.same(base.grid) && grid.same(pair.grid), Code::GridMismatch,
          "build_sub_super: grid mismatch");
  require(kind != EntireKind::Merging, Code::InvalidArgument,
          "build_sub_super: the merging pair needs the variant components");
  // evaluation-only family around the supplied gauge; eps still shrinks against
  // the positivity requirement, keeping mu and M
  SandwichFamily f;
  f.kind = kind;
  f.frame_speed = base.speed;
  f.lambda = pair.lambda;
  f.grid = grid;
  f.base_u = base.values;
  f.base_v.assign(grid.n, 0.0);
  f.phi = pair.phi;
  f.psi = pair.psi;
  f.gauge = make_time_gauge(g.mu, g.eps, g.M);
  while (!members_inside_box(f)) {
    if (++f.shrink_count > 60)
      fail(Code::PositivityFailure, "build_sub_super: no eps keeps the members positive");
    f.gauge = make_time_gauge(g.mu, f.gauge.eps * 0.5, g.M);
  }
  return evaluate_pair(f, t);
}

double sandwich_inequality_violation(const SandwichFamily& f, double t, bool sub_side,
                                     bool super_side) {
  const ModelParams& p = f.params;
  const std::size_t n = f.grid.n;
  const double h = f.grid.h();
  const double c = f.frame_speed;
  const double mu = f.gauge.mu, eps = f.gauge.eps, M = f.gauge.M;

  double worst = 0.0;
  auto scan = [&](double amp, double damp, bool is_sub) {
    // member (u, v) = base + amp * (phi, psi), d(amp)/dt = damp
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double u = f.base_u[i] + amp * f.phi[i];
      const double v = f.base_v[i] + amp * f.psi[i];
      const double um = f.base_u[i - 1] + amp * f.phi[i - 1];
      const double up = f.base_u[i + 1] + amp * f.phi[i + 1];
      const double vm = f.base_v[i - 1] + amp * f.psi[i - 1];
      const double vp = f.base_v[i + 1] + amp * f.psi[i + 1];
      const double a1 = (up - 2.0 * u + um) / (h * h) + c * (up - um) / (2.0 * h) +
                        u * (1.0 - u - p.a * v);
      const double a2 = p.d * (vp - 2.0 * v + vm) / (h * h) + c * (vp - vm) / (2.0 * h) +
                        p.r * v * (1.0 - v - p.b * u);
      const double du = damp * f.phi[i] - a1;
      const double dv = damp * f.psi[i] - a2;
      if (is_sub) {
        worst = std::max(worst, du);  // need du <= 0
        worst = std::max(worst, -dv); // need dv >= 0
      } else {
        worst = std::max(worst, -du); // need du >= 0
        worst = std::max(worst, dv);  // need dv <= 0
      }
    }
  };

  const bool sub_takes_p = f.kind != EntireKind::Merging;
  if (sub_side) {
    const double g = sub_takes_p ? f.gauge.p(t) : f.gauge.q(t);
    const double amp = eps * std::exp(g);
    const double damp = amp * (sub_takes_p ? mu + eps * M * std::exp(g)
                                           : mu - eps * M * std::exp(g));
    scan(amp, damp, true);
  }
  if (super_side) {
    const double g = sub_takes_p ? f.gauge.q(t) : f.gauge.p(t);
    const double amp = eps * std::exp(g);
    const double damp = amp * (sub_takes_p ? mu - eps * M * std::exp(g)
                                           : mu + eps * M * std::exp(g));
    scan(amp, damp, false);
  }
  return worst;
}

EntireRun backward_construct(EntireKind kind, const ModelParams& p, double c,
                             double lambda, double eps_request, const GridSpec& grid,
                             const std::vector<double>& start_times, double t_end) {
  p.validate();
  grid.validate();
  require(!start_times.empty(), Code::InvalidArgument, "backward_construct: no start times");
  require(t_end <= 0.0, Code::InvalidArgument, "backward_construct: t_end must be <= 0");
  for (std::size_t i = 0; i < start_times.size(); ++i) {
    require(start_times[i] <= t_end - 1.0, Code::InvalidArgument,
            "backward_construct: start times must precede t_end by at least 1");
    require(i == 0 || start_times[i] < start_times[i - 1], Code::InvalidArgument,
            "backward_construct: start times must be strictly decreasing");
  }

  EntireRun run;
  run.start_times = start_times;
  run.t_end = t_end;
  run.dt = 0.00125;

  WaveProfile base;
  std::vector<double> phi, psi;
  double mu = 0.0, lam = lambda;
  switch (kind) {
    case EntireKind::Divergent: {
      base = solve_kpp_wave(c, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
      EigenPair pair = solve_eigenpair(p, c, lambda, base);
      phi = pair.phi;
      psi = pair.psi;
      mu = pair.mu;
      break;
    }
    case EntireKind::Limiting: {
      base = solve_kpp_wave(c, 1.0, 1.0, grid, Normalization::TailAmplitudeOne);
      VariantWeak w = solve_variant_weak(p, c, base, grid);
      phi = w.phi;
      psi = w.psi;
      mu = w.mu;
      lam = w.lambda3;
      break;
    }
    case EntireKind::Merging: {
      base = solve_kpp_wave(c, p.d, p.r, grid, Normalization::TailAmplitudeOne);
      VariantHat hat = solve_variant_hat(p, c, base, grid);
      phi = hat.phi_hat;
      psi = hat.psi_hat;
      mu = hat.mu_hat;
      lam = hat.lambda4;
      break;
    }
  }
  run.family = make_sandwich_family(kind, p, c, base, phi, psi, mu, lam, eps_request);

  IntegratorConfig cfg;
  cfg.dt = run.dt;
  cfg.u_left = run.family.u_left;
  cfg.u_right = run.family.u_right;
  cfg.v_left = run.family.v_left;
  cfg.v_right = run.family.v_right;

  auto snapshot_grid = [&](double t0) {
    std::vector<double> ts{t0};
    double s = std::ceil(t0 - 1e-9);
    if (s <= t0 + 1e-9) s += 1.0;
    for (; s < t_end - 1e-9; s += 1.0) ts.push_back(s);
    ts.push_back(t_end);
    return ts;
  };

  std::vector<double> prev_times;
  std::vector<StatePair> prev_lower, prev_upper;

  for (std::size_t rung = 0; rung < start_times.size(); ++rung) {
    const double t0 = start_times[rung];
    const std::vector<double> snaps = snapshot_grid(t0);
    SubSuper seed = build_sub_super(run.family, t0);
    std::vector<StatePair> lower = integrate(seed.sub, cfg, p, t_end, snaps);
    std::vector<StatePair> upper = integrate(seed.super, cfg, p, t_end, snaps);
    require(lower.size() == snaps.size() && upper.size() == snaps.size(), Code::Internal,
            "backward_construct: snapshot accounting failed");

    for (std::size_t j = 0; j < snaps.size(); ++j) {
      SubSuper wall = build_sub_super(run.family, snaps[j]);
      double viol = k_violation(wall.sub, lower[j]);
      viol = std::max(viol, k_violation(upper[j], wall.super));
      viol = std::max(viol, k_violation(lower[j], upper[j]));
      run.sandwich_worst = std::max(run.sandwich_worst, viol);
    }

    if (rung > 0) {
      double chain = 0.0;
      for (std::size_t j = 0; j < prev_times.size(); ++j) {
        const double t = prev_times[j];
        const auto it = std::find_if(snaps.begin(), snaps.end(),
                                     [&](double s) { return std::abs(s - t) < 1e-9; });
        if (it == snaps.end()) continue;
        const std::size_t k = static_cast<std::size_t>(it - snaps.begin());
        chain = std::max(chain, k_violation(prev_lower[j], lower[k]));
        chain = std::max(chain, k_violation(upper[k], prev_upper[j]));
      }
      run.chain_defects.push_back(chain);
      if (chain > 1e-7) {
        fail(Code::ChainViolation,
             "backward_construct: monotone chain broken (" + sci(chain) + "), reduce dt");
      }
    }

    run.gaps.push_back(sup_abs_diff(lower.back().u, upper.back().u) +
                       sup_abs_diff(lower.back().v, upper.back().v));

    if (rung + 1 == start_times.size()) {
      run.snapshot_times = snaps;
      run.lower_snapshots = lower;
      run.upper_snapshots = upper;
      run.lower_end = lower.back();
      run.upper_end = upper.back();
    } else {
      prev_times = snaps;
      prev_lower = std::move(lower);
      prev_upper = std::move(upper);
    }
  }

  if (run.gaps.back() >= 1e-5) {
    fail(Code::NonConvergence, "backward_construct: upper/lower gap " + sci(run.gaps.back()) +
                                   " at t_end exceeds 1e-5");
  }

  run.solution = run.lower_end;
  for (std::size_t i = 0; i < grid.n; ++i) {
    run.solution.u[i] = 0.5 * (run.lower_end.u[i] + run.upper_end.u[i]);
    run.solution.v[i] = 0.5 * (run.lower_end.v[i] + run.upper_end.v[i]);
  }
  return run;
}

std::vector<StatePair> forward_extend(const EntireRun& run, double t_forward,
                                      const GridSpec& lab_grid, double snapshot_dt,
                                      double dt) {
  lab_grid.validate();
  require(t_forward >= run.t_end, Code::InvalidArgument,
          "forward_extend: t_forward precedes the converged state");
  require(snapshot_dt > 0.0 && dt > 0.0, Code::InvalidArgument,
          "forward_extend: cadence and dt must be positive");
  const GridSpec& fg = run.family.grid;
  const double h = fg.h();
  require(std::abs(lab_grid.h() - h) < 1e-12, Code::GridMismatch,
          "forward_extend: lab grid spacing must match the frame grid");
  require(lab_grid.x_min <= fg.x_min + 1e-12 && lab_grid.x_max >= fg.x_max - 1e-12,
          Code::GridMismatch, "forward_extend: lab grid must contain the frame grid");
  const double off = (fg.x_min - lab_grid.x_min) / h;
  const auto i0 = static_cast<std::size_t>(std::llround(off));
  require(std::abs(off - static_cast<double>(i0)) < 1e-9, Code::GridMismatch,
          "forward_extend: lab grid nodes must align with the frame grid");

  // the converged frame state becomes lab data at t_end (xi = x there), padded by
  // its exponential tails on each side
  StatePair lab;
  lab.grid = lab_grid;
  lab.u.assign(lab_grid.n, 0.0);
  lab.v.assign(lab_grid.n, 0.0);
  lab.frame_speed = 0.0;
  lab.time = run.t_end;
  lab.u_cap = 1.0;
  lab.v_cap = 1.0;

  const StatePair& core = run.solution;
  for (std::size_t i = 0; i < fg.n; ++i) {
    lab.u[i0 + i] = core.u[i];
    lab.v[i0 + i] = core.v[i];
  }
  const double ru = tail_rate_u_right(run.family);
  const double rv = tail_rate_v_right(run.family);
  const double lv = left_rate_v(run.family);
  for (std::size_t i = i0; i-- > 0;) {
    const double dx = lab_grid.x(i) - fg.x_min;
    lab.u[i] = core.u.front();
    lab.v[i] = lv > 0.0 ? core.v.front() * std::exp(lv * dx) : core.v.front();
  }
  for (std::size_t i = i0 + fg.n; i < lab_grid.n; ++i) {
    const double dx = lab_grid.x(i) - fg.x_max;
    lab.u[i] = core.u.back() * std::exp(-ru * dx);
    lab.v[i] = core.v.back() * std::exp(-rv * dx);
  }

  IntegratorConfig cfg;
  cfg.dt = dt;

  std::vector<double> snaps;
  for (double t = run.t_end; t < t_forward - 1e-9; t += snapshot_dt) snaps.push_back(t);
  snaps.push_back(t_forward);
  return integrate(lab, cfg, run.family.params, t_forward, snaps);
}

StatePair bistable_envelope_eval(const BistableEnvelope& env, double t,
                                 const GridSpec& grid) {
  env.params.validate();
  require(classify_regime(env.params) == Regime::Bistable, Code::RegimeMismatch,
          "bistable envelope: regime must be bistable");
  require(t >= 0.0, Code::InvalidArgument, "bistable envelope: t must be nonnegative");
  require(env.delta1 > 0.0 && env.P0 > 0.0 && env.Q0 > 0.0 && env.xi0 < 0.0,
          Code::InvalidArgument, "bistable envelope: constants out of range");
  grid.validate();

  const double decay = std::exp(-env.delta1 * t);
  const double xi = env.xi0 * decay;
  const double P = env.P0 * decay;
  const double Q = env.Q0 * decay;

  CubicHermite wu(env.wave.grid, env.wave.u);
  CubicHermite wv(env.wave.grid, env.wave.v);
  const double lo = env.wave.grid.x_min, hi = env.wave.grid.x_max;

  StatePair out;
  out.grid = grid;
  out.u.resize(grid.n);
  out.v.resize(grid.n);
  out.frame_speed = 0.0;
  out.time = t;
  out.u_cap = 1.0;
  out.v_cap = 1.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double arg = std::clamp(grid.x(i) - env.wave.speed * t - env.shift - xi, lo, hi);
    out.u[i] = std::max(0.0, wu(arg) - Q);
    out.v[i] = std::min(1.0, wv(arg) + P);
  }
  return out;
}

namespace {

StatePair reflect_state(const StatePair& s) {
  StatePair r = s;
  r.grid.x_min = -s.grid.x_max;
  r.grid.x_max = -s.grid.x_min;
  std::reverse(r.u.begin(), r.u.end());
  std::reverse(r.v.begin(), r.v.end());
  return r;
}

} // namespace

BistableEnvelope fit_bistable_envelope(const ModelParams& p, const SystemWave& wave,
                                       const std::vector<StatePair>& trajectory,
                                       double t_from, double c_sharp, double c_hat,
                                       double tol, double P0, double Q0, double xi0) {
  p.validate();
  require(classify_regime(p) == Regime::Bistable, Code::RegimeMismatch,
          "bistable envelope: regime must be bistable");
  require(!trajectory.empty(), Code::InvalidArgument, "bistable envelope: empty trajectory");
  require(c_sharp < wave.speed && c_hat > wave.speed, Code::InvalidArgument,
          "bistable envelope: cone must straddle the interface speed");
  require(tol > 0.0 && P0 > 0.0 && Q0 > 0.0 && xi0 < 0.0, Code::InvalidArgument,
          "bistable envelope: constants out of range");

  // The lemma's wave rises from e2 to e1; the forward trajectory from the
  // backward construction has u winning on the left, so compare reflected.
  std::vector<StatePair> window;
  for (const StatePair& s : trajectory) {
    if (s.time >= t_from - 1e-9) window.push_back(reflect_state(s));
  }
  require(window.size() >= 2, Code::InvalidArgument,
          "bistable envelope: need at least two snapshots past t_from");

  BistableEnvelope env;
  env.params = p;
  env.wave = wave;
  env.P0 = P0;
  env.Q0 = Q0;
  env.xi0 = xi0;

  const StatePair& last = window.back();
  const double x_half = find_level_crossing(last.grid, last.u, 0.5, true);
  env.shift = x_half - wave.speed * last.time; // the wave itself is anchored at u(0)=1/2

  for (double delta1 : {0.05, 0.1, 0.2, 0.4}) {
    env.delta1 = delta1;
    bool ok = true;
    for (const StatePair& s : window) {
      const StatePair wall = bistable_envelope_eval(env, s.time, s.grid);
      const double lo = -c_hat * s.time;
      const double hi = -c_sharp * s.time;
      for (std::size_t i = 0; i < s.grid.n && ok; ++i) {
        const double x = s.grid.x(i);
        if (x < lo || x > hi) continue;
        if (s.u[i] > wall.u[i] + tol || s.v[i] < wall.v[i] - tol) ok = false;
      }
      if (!ok) break;
    }
    if (ok) return env;
  }
  fail(Code::EnvelopeFailure,
       "bistable envelope: no decay rate in the grid keeps the trajectory below the envelope");
}

} // namespace lvlab
