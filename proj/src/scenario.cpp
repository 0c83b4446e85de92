#include "lvlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "lvlab/eigenpair.hpp"
#include "lvlab/entire.hpp"
#include "lvlab/errors.hpp"
#include "lvlab/integrator.hpp"
#include "lvlab/interp.hpp"
#include "lvlab/metrics.hpp"
#include "lvlab/spectrum.hpp"
#include "lvlab/speeds.hpp"
#include "lvlab/waves.hpp"

namespace lvlab {

namespace {

// Re-throws module errors with the pipeline stage prepended, so a failed run
// names the first failing stage.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), name + ": " + e.what());
  }
}

GridSpec grid_or(const Config& cfg, const GridSpec& fallback) {
  if (cfg.has("grid.x_min") || cfg.has("grid.x_max") || cfg.has("grid.n"))
    return grid_from_config(cfg);
  return fallback;
}

GridSpec forward_grid_or(const Config& cfg, const GridSpec& fallback) {
  if (!cfg.has("forward.x_min") && !cfg.has("forward.x_max") && !cfg.has("forward.n"))
    return fallback;
  GridSpec g;
  g.x_min = cfg.get_double("forward.x_min");
  g.x_max = cfg.get_double("forward.x_max");
  g.n = static_cast<std::size_t>(cfg.get_int("forward.n"));
  g.validate();
  return g;
}

std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(cell));
  }
  require(!out.empty(), Code::InvalidArgument, "entire.ladder holds no start times");
  return out;
}

void write_state_csv(const std::string& path, const StatePair& s) {
  CsvWriter csv(path, {"x", "u", "v"});
  for (std::size_t i = 0; i < s.grid.n; ++i) csv.row({s.grid.x(i), s.u[i], s.v[i]});
}

void write_wave_csv(const std::string& path, const WaveProfile& w) {
  CsvWriter csv(path, {"x", "w"});
  for (std::size_t i = 0; i < w.grid.n; ++i) csv.row({w.grid.x(i), w.values[i]});
}

void write_track_csv(const std::string& path, const FrontTrack& track) {
  CsvWriter csv(path, {"t", "position"});
  for (std::size_t i = 0; i < track.times.size(); ++i)
    csv.row({track.times[i], track.positions[i]});
}

// Longest suffix of the trajectory whose every snapshot crosses the level;
// fronts only exist once the invading component has grown somewhere.
std::vector<StatePair> crossing_suffix(const std::vector<StatePair>& traj, Component comp,
                                       double level) {
  std::size_t first = traj.size();
  for (std::size_t i = traj.size(); i-- > 0;) {
    const std::vector<double>& vals = comp == Component::U ? traj[i].u : traj[i].v;
    try {
      find_level_crossing(traj[i].grid, vals, level, true);
      first = i;
    } catch (const Error&) {
      break;
    }
  }
  require(traj.size() - first >= 4, Code::LevelNotCrossed,
          "level crossed in fewer than four trailing snapshots");
  return std::vector<StatePair>(traj.begin() + static_cast<std::ptrdiff_t>(first), traj.end());
}

// Median of v e^{lambda (x - speed t)} over the tail band; the free-tail mode
// travels at exactly that speed, so the plateau is time-independent.
double tail_plateau(const StatePair& s, double lambda, double speed) {
  const auto window = decay_window(s, Component::V);
  std::vector<double> vals;
  for (std::size_t i = 0; i < s.grid.n; ++i) {
    const double x = s.grid.x(i) + s.frame_speed * s.time;
    if (x < window.first || x > window.second) continue;
    vals.push_back(s.v[i] * std::exp(lambda * (x - speed * s.time)));
  }
  std::sort(vals.begin(), vals.end());
  return vals[vals.size() / 2];
}

CheckResult make_check(const std::string& name, double measured, double bound, bool pass,
                       const std::string& detail = "") {
  CheckResult r;
  r.name = name;
  r.pass = pass;
  r.measured = measured;
  r.bound = bound;
  r.detail = detail;
  return r;
}

CheckResult check_below(const std::string& name, double measured, double bound,
                        const std::string& detail = "") {
  return make_check(name, measured, bound, measured <= bound, detail);
}

CheckResult check_rel(const std::string& name, double measured, double target, double rtol) {
  const double dev = std::abs(measured - target);
  return make_check(name, measured, target, dev <= rtol * std::abs(target),
                    "relative tolerance " + fmt_g17(rtol));
}

void note_params(Manifest& m, const RunConfig& rc) {
  m.note("scenario", scenario_name(rc.scenario));
  m.note("regime", regime_name(classify_regime(rc.params)));
  m.value("model.a", rc.params.a);
  m.value("model.b", rc.params.b);
  m.value("model.d", rc.params.d);
  m.value("model.r", rc.params.r);
  m.value("run.c", rc.c);
  m.value("run.lambda", rc.lambda);
  m.value("run.seed", static_cast<double>(rc.seed));
  m.value("grid.x_min", rc.grid.x_min);
  m.value("grid.x_max", rc.grid.x_max);
  m.value("grid.n", static_cast<double>(rc.grid.n));
}

void speeds_to_manifest(Manifest& m, const SpeedTable& st) {
  m.value("speeds.mu", st.mu);
  m.value("speeds.c_v", st.c_v);
  m.value("speeds.tau_tilde_c", st.tau_tilde_c);
  if (st.tau_c) m.value("speeds.tau_c", *st.tau_c);
  if (st.delta_v) m.value("speeds.delta_v", *st.delta_v);
  if (st.lambda_acc) m.value("speeds.lambda_acc", *st.lambda_acc);
  if (st.c_acc) m.value("speeds.c_acc", *st.c_acc);
  if (st.lambda_tilde) m.value("speeds.lambda_tilde", *st.lambda_tilde);
  if (st.c_v_tilde) m.value("speeds.c_v_tilde", *st.c_v_tilde);
  if (st.c_u1) m.value("speeds.c_u1", *st.c_u1);
  if (st.c_u2) m.value("speeds.c_u2", *st.c_u2);
}

void run_speeds_only(const RunConfig& rc, Manifest& m) {
  const SpeedTable st = stage("speed table", [&] {
    ExternalSpeeds ext;
    return speed_table(rc.params, rc.c, rc.lambda, ext);
  });
  speeds_to_manifest(m, st);
  m.check(check_below("mu_matches_lambda_times_speed_gap",
                      std::abs(st.mu - rc.lambda * (st.c_v - rc.c)), 1e-12));
  m.check(check_below("lambda_below_admissible_upper", rc.lambda,
                      admissible_lambda_upper(rc.params, rc.c)));
  const Regime regime = classify_regime(rc.params);
  if (regime == Regime::WeakCompetition &&
      rc.c > 2.0 * std::max(1.0, std::sqrt(rc.params.d * rc.params.r * rc.params.b))) {
    const LimitingConstants lim = limiting_lambda3(rc.params, rc.c);
    m.value("speeds.lambda3", lim.lambda3);
    m.value("speeds.c_v3", lim.c_v3);
  }
  if (rc.params.a < 1.0 && rc.params.b > 1.0 &&
      st.c_v > 2.0 * std::max(std::sqrt(rc.params.r * rc.params.d), std::sqrt(rc.params.a))) {
    const MergingConstants mg = merging_constants(rc.params, st.c_v);
    m.value("speeds.lambda4", mg.lambda4);
    m.value("speeds.c_u3", mg.c_u3);
  }
  CsvWriter csv(rc.output_dir + "/speeds.csv",
                {"c", "lambda", "mu", "c_v", "tau_tilde_c", "tau_c", "delta_v"});
  const double nan = std::nan("");
  csv.row({rc.c, rc.lambda, st.mu, st.c_v, st.tau_tilde_c, st.tau_c ? *st.tau_c : nan,
           st.delta_v ? *st.delta_v : nan});
}

void wave_checks(Manifest& m, const WaveProfile& w, const std::string& tag) {
  m.value(tag + ".speed", w.speed);
  m.check(check_below(tag + "_residual_sup", w.residual_sup, 1e-9));
  double mono = 0.0;
  for (std::size_t i = 0; i + 1 < w.values.size(); ++i)
    mono = std::max(mono, w.values[i + 1] - w.values[i]);
  m.check(check_below(tag + "_monotone_defect", mono, 1e-12));
  const double tau = slow_decay_root(w.d, w.r, w.speed);
  const double tau_tilde = approach_root(w.d, w.r, w.speed);
  const auto right = decay_window(w.grid, w.values);
  const DecayFit right_fit = fit_decay(w.grid, w.values, right.first, right.second);
  m.value(tag + ".tail_rate", right_fit.rate);
  m.value(tag + ".tail_prefactor", right_fit.prefactor);
  m.check(check_rel(tag + "_tail_rate", right_fit.rate, tau, 0.01));
  std::vector<double> approach(w.values.size());
  for (std::size_t i = 0; i < w.values.size(); ++i) approach[i] = 1.0 - w.values[i];
  const auto left = decay_window(w.grid, approach);
  const DecayFit left_fit = fit_decay(w.grid, approach, left.first, left.second);
  m.value(tag + ".approach_rate", -left_fit.rate);
  m.check(check_rel(tag + "_approach_rate", -left_fit.rate, tau_tilde, 0.02));
}

void run_wave_only(const RunConfig& rc, Manifest& m) {
  const WaveProfile w = stage("wave solve", [&] {
    return solve_kpp_wave(rc.c, rc.params.d, rc.params.r, rc.grid,
                          Normalization::TailAmplitudeOne);
  });
  stage("wave metrics", [&] { wave_checks(m, w, "wave"); });
  write_wave_csv(rc.output_dir + "/wave.csv", w);
}

void run_eigen_only(const RunConfig& rc, Manifest& m) {
  const WaveProfile w = stage("wave solve", [&] {
    return solve_kpp_wave(rc.c, 1.0, 1.0, rc.grid, Normalization::TailAmplitudeOne);
  });
  const EigenPair pair =
      stage("eigenpair solve", [&] { return solve_eigenpair(rc.params, rc.c, rc.lambda, w); });
  m.value("eigen.mu", pair.mu);
  m.value("eigen.lambda", pair.lambda);
  m.value("eigen.delta_v", pair.delta_v);
  m.value("eigen.upsilon", pair.upsilon);
  m.check(check_below("psi_residual_sup", pair.residual_psi, 1e-9));
  m.check(check_below("phi_residual_sup", pair.residual_phi, 1e-9));
  double phi_max = 0.0, psi_min = 0.0;
  for (double v : pair.phi) phi_max = std::max(phi_max, v);
  for (double v : pair.psi) psi_min = std::min(psi_min, v);
  m.check(check_below("phi_nonpositive_defect", phi_max, 1e-12));
  m.check(check_below("psi_nonnegative_defect", -psi_min, 1e-12));
  m.check(check_below("psi_gauge_monotonicity_defect",
                      psi_gauge_monotonicity_defect(pair.delta_v, pair.grid, pair.psi), 1e-12));
  const PsiEnvelope env =
      stage("psi envelope", [&] { return build_psi_envelope(rc.c, rc.lambda, rc.params, w); });
  m.value("envelope.lambda_tilde", env.lambda_tilde);
  m.value("envelope.D", env.D);
  m.value("envelope.eps2", env.eps2);
  m.value("envelope.x_zero", env.x_zero);
  m.value("envelope.x2", env.x2);
  m.value("envelope.K0", env.K0);
  m.check(check_below("psi_envelope_violation",
                      psi_envelope_violation(env, pair.grid, pair.psi), 1e-8));
  CsvWriter csv(rc.output_dir + "/eigen.csv",
                {"x", "phi", "psi", "envelope_lower", "envelope_upper"});
  for (std::size_t i = 0; i < pair.grid.n; ++i) {
    const double x = pair.grid.x(i);
    csv.row({x, pair.phi[i], pair.psi[i], env.lower(x), env.upper(x)});
  }
}

void run_spectrum_scan(const RunConfig& rc, Manifest& m) {
  require(rc.mu_step > 0.0 && rc.mu_to > rc.mu_from, Code::InvalidArgument,
          "spectrum scan needs mu_from < mu_to and a positive step");
  CsvWriter csv(rc.output_dir + "/spectrum.csv",
                {"re_mu", "im_mu", "region", "i_plus", "i_minus", "index"});
  std::vector<std::pair<double, MuRegion>> samples;
  const auto count = static_cast<std::size_t>(
      std::floor((rc.mu_to - rc.mu_from) / rc.mu_step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) {
    const double mu = rc.mu_from + static_cast<double>(k) * rc.mu_step;
    const FredholmVerdict verdict = classify_mu(rc.params, rc.c, {mu, 0.0});
    samples.emplace_back(mu, verdict.region);
    csv.row_mixed({fmt_g17(mu), fmt_g17(0.0), mu_region_name(verdict.region),
                   std::to_string(verdict.i_plus), std::to_string(verdict.i_minus),
                   std::to_string(verdict.index)});
  }
  // Transition summary: boundaries sit where the open regions change.
  std::string summary;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (k == 0 || samples[k].second != samples[k - 1].second) {
      if (!summary.empty()) summary += "; ";
      summary += std::string(mu_region_name(samples[k].second)) + " from mu = " +
                 fmt_g17(samples[k].first);
    }
  }
  m.note("spectrum.regions", summary);
  const double lower_parab = rc.params.r * (1.0 - rc.params.b);
  const double upper_parab = rc.params.r;
  if (rc.mu_from <= lower_parab && lower_parab <= rc.mu_to) {
    const FredholmVerdict at = classify_mu(rc.params, rc.c, {lower_parab, 0.0});
    m.check(make_check("lower_parabola_on_boundary", lower_parab, lower_parab,
                       at.region == MuRegion::OnBoundary));
  }
  if (rc.mu_from <= upper_parab && upper_parab <= rc.mu_to) {
    const FredholmVerdict at = classify_mu(rc.params, rc.c, {upper_parab, 0.0});
    m.check(make_check("upper_parabola_on_boundary", upper_parab, upper_parab,
                       at.region == MuRegion::OnBoundary));
  }
  if (rc.mu_polar > lower_parab && rc.mu_polar < upper_parab) {
    const WaveProfile w = stage("wave solve", [&] {
      return solve_kpp_wave(rc.c, 1.0, 1.0, rc.grid, Normalization::TailAmplitudeOne);
    });
    const PolarTrajectory polar = stage("polar shoot", [&] {
      return polar_shoot(rc.params, rc.c, rc.mu_polar, w, 0.5, rc.grid.x_min);
    });
    m.value("polar.mu", rc.mu_polar);
    m.value("polar.theta_floor", polar.theta_floor);
    m.value("polar.terminal_theta", polar.terminal_theta);
    m.check(check_rel("polar_terminal_theta", polar.terminal_theta, polar.theta_floor, 0.01));
  }
}

struct EntireArtifacts {
  EntireRun run;
  std::vector<StatePair> forward;
};

EntireArtifacts run_entire_pipeline(const RunConfig& rc, EntireKind kind, Manifest& m) {
  EntireArtifacts art;
  art.run = stage("backward construction", [&] {
    return backward_construct(kind, rc.params, rc.c, rc.lambda, rc.eps_request, rc.grid,
                              rc.start_times, rc.t_end);
  });
  const EntireRun& run = art.run;
  m.value("gauge.mu", run.family.gauge.mu);
  m.value("gauge.eps", run.family.gauge.eps);
  m.value("gauge.M", run.family.gauge.M);
  m.value("gauge.k", run.family.gauge.k());
  m.value("gauge.shrink_count", static_cast<double>(run.family.shrink_count));
  m.value("entire.lambda_used", run.family.lambda);
  m.check(check_below("deepest_gap_at_t_end", run.gaps.back(), 1e-5));
  m.check(check_below("sandwich_worst_violation", run.sandwich_worst, 1e-6));
  double chain_worst = 0.0;
  for (double d : run.chain_defects) chain_worst = std::max(chain_worst, d);
  m.check(check_below("chain_worst_defect", chain_worst, 1e-7));
  double gap_growth = 0.0;
  for (std::size_t i = 0; i + 1 < run.gaps.size(); ++i)
    gap_growth = std::max(gap_growth, run.gaps[i + 1] - run.gaps[i]);
  m.check(check_below("gaps_nonincreasing_defect", gap_growth, 0.0,
                      "deeper starts close the sandwich further"));

  {
    CsvWriter csv(rc.output_dir + "/ladder.csv", {"start_time", "gap", "chain_defect"});
    for (std::size_t i = 0; i < run.start_times.size(); ++i)
      csv.row({run.start_times[i], run.gaps[i], i == 0 ? 0.0 : run.chain_defects[i - 1]});
  }
  {
    CsvWriter csv(rc.output_dir + "/entire_t_end.csv",
                  {"x", "u_lower", "v_lower", "u_upper", "v_upper", "u_mid", "v_mid"});
    for (std::size_t i = 0; i < run.family.grid.n; ++i)
      csv.row({run.family.grid.x(i), run.lower_end.u[i], run.lower_end.v[i], run.upper_end.u[i],
               run.upper_end.v[i], run.solution.u[i], run.solution.v[i]});
  }

  art.forward = stage("forward extension", [&] {
    return forward_extend(run, rc.t_forward, rc.lab_grid, rc.snapshot_dt, rc.dt);
  });
  write_state_csv(rc.output_dir + "/forward_final.csv", art.forward.back());
  return art;
}

void run_divergent(const RunConfig& rc, Manifest& m) {
  const SpeedTable st = speed_table(rc.params, rc.c, rc.lambda);
  speeds_to_manifest(m, st);
  const EntireArtifacts art = run_entire_pipeline(rc, EntireKind::Divergent, m);
  const bool destiny = rc.t_forward >= 40.0;

  stage("front metrics", [&] {
    const auto v_traj = crossing_suffix(art.forward, Component::V, 0.5);
    const FrontTrack v_track = track_level_set(v_traj, Component::V, 0.5);
    write_track_csv(rc.output_dir + "/front_v.csv", v_track);
    m.value("front.v_speed", v_track.fitted_speed);
    m.value("front.v_residual", v_track.residual);
    if (destiny) m.check(check_rel("v_front_speed", v_track.fitted_speed, st.c_v, 0.02));

    const auto u_traj = crossing_suffix(art.forward, Component::U, 0.5);
    const FrontTrack u_track = track_level_set(u_traj, Component::U, 0.5);
    write_track_csv(rc.output_dir + "/front_u.csv", u_track);
    m.value("front.u_speed", u_track.fitted_speed);

    const double plateau = tail_plateau(art.forward.back(), rc.lambda, st.c_v);
    m.value("tail.plateau", plateau);
    m.check(check_rel("tail_plateau_matches_eps", plateau, art.run.family.gauge.eps, 0.05));
    return 0;
  });

  if (destiny) {
    stage("region checks", [&] {
      const Equilibrium star = e_star(rc.params);
      require(st.c_v_tilde.has_value() || st.lambda_tilde.has_value(), Code::DomainError,
              "weak-competition cone speeds unavailable");
      // c_v_tilde needs a measured minimal speed; fall back on its closed-form part.
      double c_v_tilde = st.c_v_tilde ? *st.c_v_tilde : 0.0;
      if (!st.c_v_tilde) {
        const double lt = *st.lambda_tilde;
        c_v_tilde = rc.params.d * lt + rc.params.r * (1.0 - rc.params.b) / lt;
      }
      double c_u1 = 0.0;
      if (st.c_u1) {
        c_u1 = *st.c_u1;
      } else if (st.c_acc) {
        const SpeedEstimate c1s = estimate_minimal_speed(rc.params, EquilibriumTag::EStar,
                                                         EquilibriumTag::E2, 30.0);
        c_u1 = std::max(c1s.speed, *st.c_acc);
        m.value("speeds.c1_star_measured", c1s.speed);
      }
      m.value("cone.left_speed", -c_v_tilde + 0.3);
      m.value("cone.right_speed", c_u1 - 0.3);
      const RegionReport mid =
          region_check(art.forward, -c_v_tilde + 0.3, c_u1 - 0.3, star, 5.0);
      m.value("cone.mid_deviation", mid.sup);
      m.check(check_below("cone_deviation_from_coexistence", mid.sup, 0.05));
      const RegionReport beyond = region_check(art.forward, st.c_v + 0.3, 1e6, {0.0, 0.0}, 5.0);
      m.value("cone.beyond_deviation", beyond.sup);
      m.check(check_below("beyond_front_deviation", beyond.sup, 0.05));
      return 0;
    });

    stage("shape lock", [&] {
      const GridSpec ref_grid = suggest_wave_grid(st.c_v, rc.params.d, rc.params.r, 0.05);
      const WaveProfile psi_cv = solve_kpp_wave(st.c_v, rc.params.d, rc.params.r, ref_grid,
                                                Normalization::TailAmplitudeOne);
      const ShapeLock lock = lock_shape(art.forward, psi_cv, st.c_v, Component::V);
      m.value("lock.v_shift", lock.fitted_shift);
      m.value("lock.v_sup_error", lock.sup_error);
      const double target = std::log(art.run.family.gauge.eps) / rc.lambda;
      m.check(check_rel("v_lock_shift", lock.fitted_shift, target, 0.10));
      return 0;
    });
  }
}

void run_limiting(const RunConfig& rc, Manifest& m) {
  const LimitingConstants lim = limiting_lambda3(rc.params, rc.c);
  m.value("speeds.lambda3", lim.lambda3);
  m.value("speeds.c_v3", lim.c_v3);
  const EntireArtifacts art = run_entire_pipeline(rc, EntireKind::Limiting, m);
  m.check(check_below("mu_matches_r_times_1_minus_b",
                      std::abs(art.run.family.gauge.mu - rc.params.r * (1.0 - rc.params.b)),
                      1e-12));
  // The variant components again, for the record (cheap direct solves).
  stage("limiting variant report", [&] {
    const WaveProfile base =
        solve_kpp_wave(rc.c, 1.0, 1.0, rc.grid, Normalization::TailAmplitudeOne);
    const VariantWeak weak = solve_variant_weak(rc.params, rc.c, base, rc.grid);
    m.value("variant.upsilon", weak.upsilon);
    m.value("variant.phi_minus_inf", weak.phi_minus_inf);
    m.check(check_below("variant_psi_residual", weak.residual_psi, 1e-9));
    m.check(check_below("variant_phi_residual", weak.residual_phi, 1e-9));
    double mono = 0.0;
    for (std::size_t i = 0; i + 1 < weak.psi.size(); ++i)
      mono = std::max(mono, weak.psi[i + 1] - weak.psi[i]);
    m.check(check_below("variant_psi_nonincreasing_defect", mono, 1e-10));
    return 0;
  });
  stage("front metrics", [&] {
    const auto v_traj = crossing_suffix(art.forward, Component::V, 0.5);
    const FrontTrack v_track = track_level_set(v_traj, Component::V, 0.5);
    write_track_csv(rc.output_dir + "/front_v.csv", v_track);
    m.value("front.v_speed", v_track.fitted_speed);
    if (rc.t_forward >= 40.0)
      m.check(check_rel("v_front_speed", v_track.fitted_speed, lim.c_v3, 0.03));
    return 0;
  });
}

void run_merging(const RunConfig& rc, Manifest& m) {
  const MergingConstants mg = merging_constants(rc.params, rc.c);
  m.value("speeds.lambda4", mg.lambda4);
  m.value("speeds.c_u3", mg.c_u3);
  const EntireArtifacts art = run_entire_pipeline(rc, EntireKind::Merging, m);
  stage("merging variant report", [&] {
    const WaveProfile base =
        solve_kpp_wave(rc.c, rc.params.d, rc.params.r, rc.grid, Normalization::TailAmplitudeOne);
    const VariantHat hat = solve_variant_hat(rc.params, rc.c, base, rc.grid);
    m.value("variant.upsilon_hat", hat.upsilon_hat);
    m.value("variant.psi_minus_inf", hat.psi_minus_inf);
    m.check(check_below("variant_phi_residual", hat.residual_phi, 1e-9));
    m.check(check_below("variant_psi_residual", hat.residual_psi, 1e-9));
    return 0;
  });
  stage("front metrics", [&] {
    const auto u_traj = crossing_suffix(art.forward, Component::U, 0.5);
    const FrontTrack u_track = track_level_set(u_traj, Component::U, 0.5);
    write_track_csv(rc.output_dir + "/front_u.csv", u_track);
    m.value("front.u_speed", u_track.fitted_speed);
    const auto v_traj = crossing_suffix(art.forward, Component::V, 0.5);
    const FrontTrack v_track = track_level_set(v_traj, Component::V, 0.5);
    write_track_csv(rc.output_dir + "/front_v.csv", v_track);
    m.value("front.v_speed", v_track.fitted_speed);
    if (rc.t_forward >= 40.0) {
      m.check(check_rel("u_front_speed", u_track.fitted_speed, mg.c_u3, 0.03));
      m.check(check_rel("v_front_speed", v_track.fitted_speed, rc.c, 0.02));
    }
    return 0;
  });
  if (rc.t_forward >= 40.0) {
    stage("shape lock", [&] {
      const GridSpec ref_grid = suggest_wave_grid(mg.c_u3, 1.0, 1.0, 0.05);
      const WaveProfile phi_ref =
          solve_kpp_wave(mg.c_u3, 1.0, 1.0, ref_grid, Normalization::TailAmplitudeOne);
      const ShapeLock lock = lock_shape(art.forward, phi_ref, mg.c_u3, Component::U);
      m.value("lock.u_shift", lock.fitted_shift);
      m.value("lock.u_sup_error", lock.sup_error);
      m.check(check_below("u_lock_sup_error", lock.sup_error, 0.05));
      return 0;
    });
  }
}

void run_bistable(const RunConfig& rc, Manifest& m) {
  // The connection itself first.
  GridSpec wave_grid{-40.0, 40.0, 1601};
  const SystemWave wave = stage("bistable wave", [&] {
    return solve_bistable_wave(rc.params, wave_grid);
  });
  m.value("bistable.speed", wave.speed);
  m.check(check_below("bistable_residual_sup", wave.residual_sup, 1e-9));
  if (rc.params.a == rc.params.b) {
    m.check(check_below("bistable_speed_zero", std::abs(wave.speed), 1e-3));
    double defect = 0.0;
    const std::size_t n = wave.grid.n;
    for (std::size_t i = 0; i < n; ++i)
      defect = std::max(defect, std::abs(wave.u[i] - wave.v[n - 1 - i]));
    m.value("bistable.reflection_defect", defect);
    m.check(check_below("bistable_reflection_symmetry", defect, 1e-6));
  }
  {
    CsvWriter csv(rc.output_dir + "/bistable_wave.csv", {"x", "u", "v"});
    for (std::size_t i = 0; i < wave.grid.n; ++i)
      csv.row({wave.grid.x(i), wave.u[i], wave.v[i]});
  }

  const std::vector<StatePair> traj = stage("collision run", [&] {
    return bistable_collision_run(rc.params, rc.c, rc.lambda, rc.grid, rc.dt, rc.t_collide,
                                  rc.snapshot_dt);
  });
  write_state_csv(rc.output_dir + "/collision_final.csv", traj.back());

  const BistableEnvelope env = stage("envelope fit", [&] {
    return fit_bistable_envelope(rc.params, wave, traj, rc.fit_t_from, rc.c_sharp, rc.c_hat);
  });
  m.value("envelope.delta1", env.delta1);
  m.value("envelope.P0", env.P0);
  m.value("envelope.Q0", env.Q0);
  m.value("envelope.xi0", env.xi0);
  m.value("envelope.shift", env.shift);
  m.check(make_check("envelope_delta1_found", env.delta1, 0.0, env.delta1 > 0.0));
  {
    const GridSpec eval_grid{-rc.grid.x_max, -rc.grid.x_min, rc.grid.n};
    const StatePair walls = bistable_envelope_eval(env, rc.fit_t_from, eval_grid);
    CsvWriter csv(rc.output_dir + "/envelope_walls.csv", {"x", "u_bar", "v_under"});
    for (std::size_t i = 0; i < walls.grid.n; ++i)
      csv.row({walls.grid.x(i), walls.u[i], walls.v[i]});
  }
}

} // namespace

Scenario scenario_from_name(const std::string& name) {
  if (name == "divergent") return Scenario::Divergent;
  if (name == "limiting") return Scenario::Limiting;
  if (name == "merging") return Scenario::Merging;
  if (name == "bistable-envelope") return Scenario::BistableEnvelope;
  if (name == "speeds-only") return Scenario::SpeedsOnly;
  if (name == "spectrum-scan") return Scenario::SpectrumScan;
  if (name == "wave-only") return Scenario::WaveOnly;
  if (name == "eigen-only") return Scenario::EigenOnly;
  fail(Code::InvalidArgument,
       "unknown scenario '" + name +
           "' (expected divergent, limiting, merging, bistable-envelope, speeds-only, "
           "spectrum-scan, wave-only, or eigen-only)");
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Divergent: return "divergent";
    case Scenario::Limiting: return "limiting";
    case Scenario::Merging: return "merging";
    case Scenario::BistableEnvelope: return "bistable-envelope";
    case Scenario::SpeedsOnly: return "speeds-only";
    case Scenario::SpectrumScan: return "spectrum-scan";
    case Scenario::WaveOnly: return "wave-only";
    case Scenario::EigenOnly: return "eigen-only";
  }
  return "unknown";
}

RunConfig run_config_from(const Config& cfg) {
  RunConfig rc;
  rc.scenario = scenario_from_name(cfg.get_string("run.scenario"));
  rc.params = params_from_config(cfg);
  const Regime regime = classify_regime(rc.params); // degenerate params fail here

  switch (rc.scenario) {
    case Scenario::Merging:
      rc.c = cfg.get_double("run.c", 3.0);
      rc.grid = grid_or(cfg, {-80.0, 64.0, 2881});
      rc.lab_grid = forward_grid_or(cfg, {-120.0, 400.0, 10401});
      break;
    case Scenario::BistableEnvelope:
      rc.c = cfg.get_double("run.c", 2.5);
      rc.grid = grid_or(cfg, {-60.0, 300.0, 7201});
      break;
    default:
      rc.c = cfg.get_double("run.c", 2.5);
      rc.grid = grid_or(cfg, {-60.0, 60.0, 2401});
      rc.lab_grid = forward_grid_or(cfg, {-150.0, 200.0, 7001});
      break;
  }

  const std::string lambda_text = cfg.get_string("run.lambda", "auto");
  if (lambda_text == "auto") {
    rc.lambda_auto = true;
    switch (rc.scenario) {
      case Scenario::Limiting:
        rc.lambda = limiting_lambda3(rc.params, rc.c).lambda3;
        break;
      case Scenario::Merging:
        rc.lambda = merging_constants(rc.params, rc.c).lambda4;
        break;
      case Scenario::BistableEnvelope:
        rc.lambda = 0.2;
        break;
      default:
        rc.lambda = 0.5 * admissible_lambda_upper(rc.params, rc.c);
        break;
    }
  } else {
    rc.lambda_auto = false;
    rc.lambda = cfg.get_double("run.lambda");
  }

  rc.dt = cfg.get_double("integrator.dt", 0.005);
  rc.seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 42));
  rc.output_dir = cfg.get_string("run.out", "out");

  if (cfg.has("entire.ladder")) rc.start_times = parse_ladder(cfg.get_string("entire.ladder"));
  rc.t_end = cfg.get_double("entire.t_end", 0.0);
  rc.eps_request = cfg.get_double("entire.eps", 0.0);
  rc.t_forward = cfg.get_double("forward.t", rc.t_forward);
  rc.snapshot_dt = cfg.get_double("forward.snapshot_dt", 1.0);

  rc.mu_from = cfg.get_double("spectrum.mu_from", 0.0);
  rc.mu_to = cfg.get_double("spectrum.mu_to", 1.5);
  rc.mu_step = cfg.get_double("spectrum.mu_step", 0.01);
  rc.mu_polar = cfg.get_double("spectrum.mu_polar", 0.54);

  rc.t_collide = cfg.get_double("bistable.t_end", 50.0);
  rc.fit_t_from = cfg.get_double("bistable.fit_from", 40.0);
  rc.c_sharp = cfg.get_double("bistable.c_sharp", -1.0);
  rc.c_hat = cfg.get_double("bistable.c_hat", 3.0);

  // Scenario preconditions, before any heavy computation.
  switch (rc.scenario) {
    case Scenario::Divergent:
    case Scenario::Limiting:
      require(regime == Regime::WeakCompetition, Code::RegimeMismatch,
              std::string(scenario_name(rc.scenario)) +
                  " scenario needs weak competition (0 < a, b < 1)");
      break;
    case Scenario::Merging:
      require(regime == Regime::UWins, Code::RegimeMismatch,
              "merging scenario needs a < 1 < b");
      break;
    case Scenario::BistableEnvelope:
      require(regime == Regime::Bistable, Code::RegimeMismatch,
              "bistable-envelope scenario needs a > 1 and b > 1");
      break;
    default:
      break;
  }
  if (rc.scenario == Scenario::Divergent || rc.scenario == Scenario::EigenOnly) {
    const double upper = admissible_lambda_upper(rc.params, rc.c);
    require(rc.lambda > 0.0 && rc.lambda < upper, Code::DomainError,
            "lambda outside the admissible interval (0, " + fmt_g17(upper) + ")");
  }
  return rc;
}

std::vector<StatePair> bistable_collision_run(const ModelParams& p, double c, double lambda,
                                              const GridSpec& grid, double dt, double t_end,
                                              double snapshot_dt) {
  p.validate();
  grid.validate();
  require(t_end > 0.0 && snapshot_dt > 0.0 && dt > 0.0, Code::InvalidArgument,
          "collision run needs positive dt, snapshot_dt, t_end");
  const double tau = slow_decay_root(1.0, 1.0, c);
  const double h_u = -18.0, h_v = -46.0;
  StatePair s;
  s.grid = grid;
  s.u.resize(grid.n);
  s.v.resize(grid.n);
  s.u_cap = 1.0;
  s.v_cap = 1.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double u0 = std::min(1.0, std::exp(-tau * (x - h_u)));
    // v rides a slower tail ahead of its own front and is cleared out of the
    // region u holds at t = 0.
    s.u[i] = u0;
    s.v[i] = std::min(1.0, std::exp(-lambda * (x - h_v))) * (1.0 - u0);
  }
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.u_left = BcSpec::neumann();
  cfg.u_right = BcSpec::neumann();
  cfg.v_left = BcSpec::neumann();
  cfg.v_right = BcSpec::neumann();
  std::vector<double> snaps;
  for (double t = 0.0; t < t_end - 1e-9; t += snapshot_dt) snaps.push_back(t);
  snaps.push_back(t_end);
  return integrate(s, cfg, p, t_end, snaps);
}

Manifest run_scenario(const RunConfig& rc) {
  ensure_dir(rc.output_dir);
  Manifest m;
  note_params(m, rc);
  switch (rc.scenario) {
    case Scenario::SpeedsOnly: run_speeds_only(rc, m); break;
    case Scenario::WaveOnly: run_wave_only(rc, m); break;
    case Scenario::EigenOnly: run_eigen_only(rc, m); break;
    case Scenario::SpectrumScan: run_spectrum_scan(rc, m); break;
    case Scenario::Divergent: run_divergent(rc, m); break;
    case Scenario::Limiting: run_limiting(rc, m); break;
    case Scenario::Merging: run_merging(rc, m); break;
    case Scenario::BistableEnvelope: run_bistable(rc, m); break;
  }
  m.write(rc.output_dir);
  return m;
}

} // namespace lvlab
