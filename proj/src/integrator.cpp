#include "lvlab/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace lvlab {

namespace {

// Implicit (I - dt (kappa D2 + s D1)) operator with centered differences and
// boundary rows assembled by ghost elimination at the new time level.
struct ImplicitOp {
  std::vector<double> sub, diag, sup, rhs_fix;
  bool dirichlet_left = false, dirichlet_right = false;
  double left_value = 0.0, right_value = 0.0;

  void build(const GridSpec& g, double kappa, double s, double dt, const BcSpec& left,
             const BcSpec& right) {
    const std::size_t n = g.n;
    const double h = g.h();
    const double du = dt * kappa / (h * h);
    const double da = dt * s / (2.0 * h);
    sub.assign(n, -(du - da));
    diag.assign(n, 1.0 + 2.0 * du);
    sup.assign(n, -(du + da));
    rhs_fix.assign(n, 0.0);

    switch (left.kind) {
      case BcSpec::Kind::Dirichlet:
        dirichlet_left = true;
        left_value = left.value;
        diag[0] = 1.0;
        sup[0] = 0.0;
        break;
      case BcSpec::Kind::NeumannZero:
        diag[0] = 1.0 + 2.0 * du;
        sup[0] = -2.0 * du;
        break;
      case BcSpec::Kind::Robin: {
        require(std::abs(h * left.rate) <= 0.5, Code::InvalidArgument,
                "integrator: left Robin rate unresolvable on this grid");
        const double w = dt * left.rate * (2.0 * kappa / h - s);
        require(w >= 0.0, Code::InvalidArgument, "integrator: left Robin loses monotonicity");
        diag[0] = 1.0 + 2.0 * du + w;
        sup[0] = -2.0 * du;
        rhs_fix[0] = w * left.target;
        break;
      }
    }
    switch (right.kind) {
      case BcSpec::Kind::Dirichlet:
        dirichlet_right = true;
        right_value = right.value;
        diag[n - 1] = 1.0;
        sub[n - 1] = 0.0;
        break;
      case BcSpec::Kind::NeumannZero:
        diag[n - 1] = 1.0 + 2.0 * du;
        sub[n - 1] = -2.0 * du;
        break;
      case BcSpec::Kind::Robin: {
        require(std::abs(h * right.rate) <= 0.5, Code::InvalidArgument,
                "integrator: right Robin rate unresolvable on this grid");
        const double w = dt * right.rate * (2.0 * kappa / h + s);
        require(w >= 0.0, Code::InvalidArgument, "integrator: right Robin loses monotonicity");
        diag[n - 1] = 1.0 + 2.0 * du + w;
        sub[n - 1] = -2.0 * du;
        rhs_fix[n - 1] = w * right.target;
        break;
      }
    }
  }

  // Solves (I - dt L) w = rhs in place; work receives the eliminated diagonal.
  void solve(std::vector<double>& rhs, std::vector<double>& work) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) rhs[i] += rhs_fix[i];
    if (dirichlet_left) rhs[0] = left_value;
    if (dirichlet_right) rhs[n - 1] = right_value;
    work = diag;
    for (std::size_t i = 1; i < n; ++i) {
      const double w = sub[i] / work[i - 1];
      work[i] -= w * sup[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= work[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / work[i];
  }
};

double reaction_lipschitz(const ModelParams& p, double u_cap, double v_cap) {
  return std::max(1.0 + 2.0 * u_cap + p.a * v_cap, p.r * (1.0 + 2.0 * v_cap + p.b * u_cap));
}

void validate_step_inputs(const StatePair& state, const IntegratorConfig& cfg,
                          const ModelParams& params, double dt) {
  state.validate();
  params.validate();
  require(dt > 0.0, Code::InvalidArgument, "integrator: dt must be positive");
  const double L_auto = reaction_lipschitz(params, state.u_cap, state.v_cap);
  const double L = std::max(L_auto, cfg.reaction_lipschitz_cap);
  require(dt * L <= 1.0 + 1e-12, Code::InvalidArgument,
          "integrator: dt exceeds 1/L monotonicity bound");
  const double h = state.grid.h();
  const double s = std::abs(state.frame_speed);
  require(h * s <= 2.0 * std::min(1.0, params.d) + 1e-12, Code::InvalidArgument,
          "integrator: grid too coarse for centered advection at this frame speed");
}

void check_box(const StatePair& state) {
  double umin = 0.0, umax = 0.0, vmin = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < state.grid.n; ++i) {
    umin = std::min(umin, state.u[i]);
    umax = std::max(umax, state.u[i]);
    vmin = std::min(vmin, state.v[i]);
    vmax = std::max(vmax, state.v[i]);
  }
  if (umin < -1e-12 || vmin < -1e-12 || umax > state.u_cap + 1e-12 ||
      vmax > state.v_cap + 1e-12) {
    fail(Code::StabilityViolation, "integrator: state left the invariant box");
  }
}

void advance(StatePair& state, const ImplicitOp& op_u, const ImplicitOp& op_v, double dt,
             const ModelParams& p, std::vector<double>& work) {
  const std::size_t n = state.grid.n;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = state.u[i], v = state.v[i];
    state.u[i] = u + dt * u * (1.0 - u - p.a * v);
    state.v[i] = v + dt * p.r * v * (1.0 - v - p.b * u);
  }
  op_u.solve(state.u, work);
  op_v.solve(state.v, work);
  state.time += dt;
}

} // namespace

void pin_caps(StatePair& state) {
  state.validate();
  if (state.u_cap == 0.0) {
    double s = 0.0;
    for (double x : state.u) s = std::max(s, x);
    state.u_cap = std::max(1.0, s);
  }
  if (state.v_cap == 0.0) {
    double s = 0.0;
    for (double x : state.v) s = std::max(s, x);
    state.v_cap = std::max(1.0, s);
  }
}

StatePair step(const StatePair& state, const IntegratorConfig& cfg, const ModelParams& params) {
  cfg.validate();
  StatePair next = state;
  pin_caps(next);
  validate_step_inputs(next, cfg, params, cfg.dt);
  ImplicitOp op_u, op_v;
  op_u.build(next.grid, 1.0, next.frame_speed, cfg.dt, cfg.u_left, cfg.u_right);
  op_v.build(next.grid, params.d, next.frame_speed, cfg.dt, cfg.v_left, cfg.v_right);
  std::vector<double> work(next.grid.n);
  advance(next, op_u, op_v, cfg.dt, params, work);
  check_box(next);
  return next;
}

std::vector<StatePair> integrate(StatePair state, const IntegratorConfig& cfg,
                                 const ModelParams& params, double t_end,
                                 const std::vector<double>& snapshot_times) {
  cfg.validate();
  pin_caps(state);
  validate_step_inputs(state, cfg, params, cfg.dt);
  require(t_end >= state.time, Code::InvalidArgument, "integrate: t_end precedes state time");
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    require(i == 0 || snapshot_times[i - 1] <= snapshot_times[i], Code::InvalidArgument,
            "integrate: snapshot times not sorted");
    require(snapshot_times[i] >= state.time - 1e-12 && snapshot_times[i] <= t_end + 1e-12,
            Code::InvalidArgument, "integrate: snapshot time outside [t0, t_end]");
  }

  std::vector<double> events = snapshot_times;
  events.push_back(t_end);

  std::vector<StatePair> out;
  std::vector<double> work(state.grid.n);
  ImplicitOp op_u, op_v;
  double built_dt = -1.0;

  for (std::size_t e = 0; e < events.size(); ++e) {
    const double target = events[e];
    const double gap = target - state.time;
    if (gap > 1e-12 * std::max(1.0, std::abs(target))) {
      const auto nsteps =
          static_cast<std::size_t>(std::ceil(gap / cfg.dt - 1e-9));
      const double dt_local = gap / static_cast<double>(std::max<std::size_t>(nsteps, 1));
      if (dt_local != built_dt) {
        op_u.build(state.grid, 1.0, state.frame_speed, dt_local, cfg.u_left, cfg.u_right);
        op_v.build(state.grid, params.d, state.frame_speed, dt_local, cfg.v_left, cfg.v_right);
        built_dt = dt_local;
      }
      for (std::size_t k = 0; k < std::max<std::size_t>(nsteps, 1); ++k) {
        advance(state, op_u, op_v, dt_local, params, work);
      }
      state.time = target;
      check_box(state);
    } else {
      state.time = target;
    }
    const bool is_snapshot = e + 1 < events.size();
    if (is_snapshot) {
      out.push_back(state);
    } else {
      if (!out.empty() && !snapshot_times.empty() &&
          std::abs(snapshot_times.back() - t_end) <= 1e-12 * std::max(1.0, std::abs(t_end))) {
        break; // final state already captured as the last snapshot
      }
      out.push_back(state);
    }
  }
  return out;
}

} // namespace lvlab
