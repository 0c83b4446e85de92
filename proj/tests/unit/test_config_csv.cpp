#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "lvlab/config.hpp"
#include "lvlab/csv.hpp"
#include "lvlab/errors.hpp"

using namespace lvlab;

TEST_CASE("config parses flat key-value text") {
  const Config cfg = Config::from_string(
      "# leading comment\n"
      "model.a = 0.5\n"
      "model.b=0.25   \n"
      "\n"
      "run.out = out/dir\n"
      "run.seed = 7\n"
      "run.seed = 9\n"); // later assignment wins
  CHECK(cfg.get_double("model.a") == 0.5);
  CHECK(cfg.get_double("model.b") == 0.25);
  CHECK(cfg.get_string("run.out") == "out/dir");
  CHECK(cfg.get_int("run.seed") == 9);
  CHECK(cfg.get_double("missing.key", 1.25) == 1.25);
  CHECK_THROWS_AS(cfg.get_double("missing.key"), Error);
  CHECK_THROWS_AS((void)Config::from_string("no equals sign here\n"), Error);
  CHECK_THROWS_AS((void)Config::from_string("model.a = not_a_number\n").get_double("model.a"),
                  Error);
}

TEST_CASE("model and grid blocks convert with validation") {
  const Config cfg = Config::from_string(
      "model.a = 0.5\nmodel.b = 0.5\nmodel.d = 1\nmodel.r = 1\n"
      "grid.x_min = -10\ngrid.x_max = 10\ngrid.n = 401\n");
  const ModelParams p = params_from_config(cfg);
  CHECK(p.a == 0.5);
  const GridSpec g = grid_from_config(cfg);
  CHECK(g.n == 401);
  CHECK(g.h() == doctest::Approx(0.05));
  const Config bad = Config::from_string(
      "model.a = 0.5\nmodel.b = 0.5\nmodel.d = -1\nmodel.r = 1\n");
  CHECK_THROWS_AS(params_from_config(bad), Error);
}

TEST_CASE("17 significant digits survive a round trip") {
  for (double v : {3.141592653589793, 0.015898890117216347, 5.2, 1e-300, -42.0}) {
    const std::string s = fmt_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("csv writer emits header plus full-precision rows") {
  const std::string dir = "csv_test_out";
  ensure_dir(dir);
  const std::string path = dir + "/tiny.csv";
  {
    CsvWriter csv(path, {"x", "y"});
    csv.row({1.0, 0.1});
    csv.row({2.0, 0.2});
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y");
  std::getline(in, line);
  CHECK(line.substr(0, 2) == "1,");
  CHECK(line.find("0.1000000000000000") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("manifest renders notes, values, and check verdicts") {
  Manifest m;
  m.note("scenario", "wave-only");
  m.value("c_v", 5.2);
  CheckResult pass{"tail_rate", true, 0.5, 0.505, "fit over the low band"};
  CheckResult fail_check{"speed", false, 3.0, 2.0, ""};
  m.check(pass);
  CHECK(m.all_pass());
  m.check(fail_check);
  CHECK(!m.all_pass());
  const std::string text = m.render();
  CHECK(text.find("scenario = wave-only") != std::string::npos);
  CHECK(text.find(fmt_g17(5.2)) != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);

  const std::string dir = "manifest_test_out/nested";
  const std::string path = m.write(dir);
  std::ifstream in(path);
  CHECK(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == text);
}
