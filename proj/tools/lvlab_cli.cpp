// Command-line front end. Talks to the core exclusively through the C API.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "CLI11.hpp"
#include "lvlab.h"

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  unsigned long long seed = 42;
  bool seed_given = false;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config, "flat key-value config file (section.key = value)");
  cmd->add_option("--out", opts.out, "output directory (overrides run.out)");
  cmd->add_option("--seed", opts.seed, "seed for randomized checks")
      ->each([&](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--workers", opts.workers, "worker thread cap (env LV_LAB_WORKERS wins)");
}

int resolve_workers(int flag_value) {
  const char* env = std::getenv("LV_LAB_WORKERS");
  if (env != nullptr && env[0] != '\0') {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && parsed >= 1) return static_cast<int>(parsed);
    std::fprintf(stderr, "warning: ignoring LV_LAB_WORKERS='%s' (want a positive integer)\n",
                 env);
  }
  return flag_value;
}

int report_failure(int status) {
  std::fprintf(stderr, "error [%s]: %s\n", lvlab_status_name(status), lvlab_last_error());
  return 2;
}

// Runs one scenario; forced_scenario empty means "use run.scenario from config".
int run_scenario_cmd(const CommonOpts& opts, const std::string& forced_scenario,
                     bool entire_only) {
  lvlab_ctx* ctx = lvlab_ctx_new();
  if (ctx == nullptr) {
    std::fprintf(stderr, "error: out of memory\n");
    return 2;
  }
  int status = LVLAB_OK;
  do {
    if (!opts.config.empty()) {
      status = lvlab_ctx_load_file(ctx, opts.config.c_str());
      if (status != LVLAB_OK) break;
    }
    if (opts.seed_given) {
      status = lvlab_ctx_set(ctx, "run.seed", std::to_string(opts.seed).c_str());
      if (status != LVLAB_OK) break;
    }
    status = lvlab_set_workers(resolve_workers(opts.workers));
    if (status != LVLAB_OK) break;

    if (entire_only) {
      char name[64] = {0};
      status = lvlab_ctx_get(ctx, "run.scenario", name, sizeof(name));
      if (status != LVLAB_OK) {
        std::fprintf(stderr, "error: entire needs run.scenario in the config "
                             "(divergent, limiting, or merging)\n");
        break;
      }
      if (std::strcmp(name, "divergent") != 0 && std::strcmp(name, "limiting") != 0 &&
          std::strcmp(name, "merging") != 0) {
        std::fprintf(stderr,
                     "error: entire supports divergent, limiting, or merging (got '%s')\n",
                     name);
        lvlab_ctx_free(ctx);
        return 2;
      }
    }

    int failed = 0;
    status = lvlab_run_scenario(ctx, forced_scenario.empty() ? nullptr : forced_scenario.c_str(),
                                opts.out.empty() ? nullptr : opts.out.c_str(), &failed);
    if (status != LVLAB_OK) break;
    std::fputs(lvlab_report_text(), stdout);
    lvlab_ctx_free(ctx);
    return failed == 0 ? 0 : 1;
  } while (false);
  lvlab_ctx_free(ctx);
  return report_failure(status);
}

int run_verify_cmd(const CommonOpts& opts, const std::string& suite) {
  const int status = lvlab_set_workers(resolve_workers(opts.workers));
  if (status != LVLAB_OK) return report_failure(status);
  int failed = 0;
  const int verify_status = lvlab_run_verify(
      suite.c_str(), opts.seed, opts.out.empty() ? nullptr : opts.out.c_str(), &failed);
  if (verify_status != LVLAB_OK) return report_failure(verify_status);
  std::fputs(lvlab_report_text(), stdout);
  return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"competition-diffusion laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lvlab_version());

  struct SubSpec {
    const char* name;
    const char* help;
    const char* forced; // run.scenario override, empty = from config
    bool entire_only;
  };
  const SubSpec specs[] = {
      {"speeds", "closed-form speed and decay constants", "speeds-only", false},
      {"wave", "single-species traveling wave profile", "wave-only", false},
      {"eigen", "linearized pair and its envelope", "eigen-only", false},
      {"spectrum", "essential-spectrum region scan", "spectrum-scan", false},
      {"entire", "backward construction and forward destiny", "", true},
      {"simulate", "scenario pipeline named by run.scenario", "", false},
  };

  CommonOpts opts[7];
  int which = -1;
  for (int i = 0; i < 6; ++i) {
    CLI::App* cmd = app.add_subcommand(specs[i].name, specs[i].help);
    add_common(cmd, opts[i]);
    cmd->callback([&which, i] { which = i; });
  }

  std::string suite = "unit";
  CLI::App* verify = app.add_subcommand("verify", "run a check suite");
  verify->add_option("--suite", suite, "unit, property, or acceptance")
      ->check(CLI::IsMember({"unit", "property", "acceptance"}));
  add_common(verify, opts[6]);
  verify->callback([&which] { which = 6; });

  CLI11_PARSE(app, argc, argv);

  if (which == 6) return run_verify_cmd(opts[6], suite);
  return run_scenario_cmd(opts[which], specs[which].forced, specs[which].entire_only);
}
