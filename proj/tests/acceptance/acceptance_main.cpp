// Acceptance gate: runs the numbered end-to-end checks and prints one verdict
// line each. Usage: acceptance [N | all]. Exit code is the failure count.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "lvlab/errors.hpp"
#include "lvlab/verify.hpp"
#include "lvlab/workers.hpp"

namespace {

int run_one(int n) {
  try {
    const lvlab::CheckResult r = lvlab::run_criterion(n);
    std::printf("criterion %d: %s %s measured=%.17g bound=%.17g%s%s\n", n,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.bound,
                r.detail.empty() ? "" : " | ", r.detail.c_str());
    return r.pass ? 0 : 1;
  } catch (const lvlab::Error& e) {
    std::printf("criterion %d: FAIL [%s] %s\n", n, lvlab::code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    std::printf("criterion %d: FAIL [exception] %s\n", n, e.what());
  }
  return 1;
}

} // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("LV_LAB_WORKERS")) {
    const int workers = std::atoi(env);
    if (workers >= 1) lvlab::set_worker_cap(workers);
  }

  std::vector<int> wanted;
  if (argc < 2 || std::strcmp(argv[1], "all") == 0) {
    for (int n = 1; n <= lvlab::criterion_count; ++n) wanted.push_back(n);
  } else {
    for (int i = 1; i < argc; ++i) {
      const int n = std::atoi(argv[i]);
      if (n < 1 || n > lvlab::criterion_count) {
        std::fprintf(stderr, "usage: %s [all | N...] with N in 1..%d\n", argv[0],
                     lvlab::criterion_count);
        return 2;
      }
      wanted.push_back(n);
    }
  }

  int failures = 0;
  for (int n : wanted) failures += run_one(n);
  if (wanted.size() > 1)
    std::printf("%d/%zu criteria passed\n", static_cast<int>(wanted.size()) - failures,
                wanted.size());
  return failures;
}
