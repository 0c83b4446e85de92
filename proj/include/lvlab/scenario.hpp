#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lvlab/config.hpp"
#include "lvlab/csv.hpp"
#include "lvlab/types.hpp"

namespace lvlab {

enum class Scenario {
  Divergent,
  Limiting,
  Merging,
  BistableEnvelope,
  SpeedsOnly,
  SpectrumScan,
  WaveOnly,
  EigenOnly,
};

Scenario scenario_from_name(const std::string& name);
const char* scenario_name(Scenario s);

// Fully resolved run request. Defaults are scenario-aware; anything the config
// file sets explicitly wins.
struct RunConfig {
  Scenario scenario = Scenario::SpeedsOnly;
  ModelParams params;
  double c = 2.5;            // wave / frame speed (the v-frame speed c_v for merging)
  double lambda = 0.0;       // resolved tail exponent
  bool lambda_auto = true;   // "auto": midpoint of the admissible interval
  GridSpec grid{-60.0, 60.0, 2401};
  double dt = 0.005;
  std::string output_dir = "out";
  std::uint64_t seed = 42;

  // entire-solution pipeline
  std::vector<double> start_times{-4.0, -6.0, -8.0, -10.0};
  double t_end = 0.0;
  double eps_request = 0.0; // 0 = pick mu/(2M)
  double t_forward = 20.0;
  GridSpec lab_grid{-150.0, 200.0, 7001};
  double snapshot_dt = 1.0;

  // spectrum scan
  double mu_from = 0.0;
  double mu_to = 1.5;
  double mu_step = 0.01;
  double mu_polar = 0.54;

  // bistable collision run
  double t_collide = 50.0;
  double fit_t_from = 40.0;
  double c_sharp = -1.0;
  double c_hat = 3.0;
};

// Reads run.scenario plus the scenario's knobs from a flat key-value config;
// validates regime and admissibility before any computation.
RunConfig run_config_from(const Config& cfg);

// Executes the scenario pipeline, writes CSVs plus manifest.txt under
// rc.output_dir and returns the manifest. A manifest with a failed check makes
// the CLI exit nonzero; hard errors throw with the failing stage in the message.
Manifest run_scenario(const RunConfig& rc);

// Two-front collision in the bistable regime: u holds the far left and spreads
// at speed c off a prepared tail, v rides a slower-decaying tail that overtakes
// it, and the interface freezes into the bistable connection. Lab frame,
// snapshots every snapshot_dt.
std::vector<StatePair> bistable_collision_run(const ModelParams& p, double c, double lambda,
                                              const GridSpec& grid, double dt, double t_end,
                                              double snapshot_dt = 1.0);

} // namespace lvlab
