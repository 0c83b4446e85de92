#include "doctest.h"

#include "lvlab/errors.hpp"
#include "lvlab/verify.hpp"

using namespace lvlab;

namespace {

void require_all_pass(const std::vector<CheckResult>& results) {
  REQUIRE(!results.empty());
  for (const CheckResult& r : results) {
    INFO(r.name, ": measured=", r.measured, " bound=", r.bound, " ", r.detail);
    CHECK(r.pass);
  }
}

} // namespace

TEST_CASE("deterministic check suite is green") { require_all_pass(verify_suite("unit", 0)); }

TEST_CASE("randomized check suite is green under the default seed") {
  require_all_pass(verify_suite("property", 42));
}

TEST_CASE("randomized check suite is green under another seed") {
  require_all_pass(verify_suite("property", 20260814));
}

TEST_CASE("unknown suites are rejected") {
  CHECK_THROWS_AS((void)verify_suite("nope", 1), Error);
}
