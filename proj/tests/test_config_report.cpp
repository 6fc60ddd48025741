#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nsbesov/config.hpp>
#include <nsbesov/report.hpp>

using namespace nsbesov;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing: pairs, comments, typed access") {
  Config cfg = parse_config(
      "# leading comment\n"
      "grid.n = 64\n"
      "solver.tol = 1e-8   # trailing comment\n"
      "\n"
      "  datum.name=taylor_green\n"
      "experiment.flag = true\n"
      "solver.seeds = 1, 2,3\n"
      "datum.seed = 12345678901\n");

  CHECK(cfg.get_int("grid.n") == 64);
  CHECK(cfg.get_double("solver.tol") == 1e-8);
  CHECK(cfg.get_string("datum.name") == "taylor_green");
  CHECK(cfg.get_bool("experiment.flag"));
  CHECK(cfg.get_u64("datum.seed") == 12345678901ULL);
  CHECK(cfg.get_double_list("solver.seeds") == std::vector<double>{1.0, 2.0, 3.0});

  SECTION("fallbacks engage only for missing keys") {
    CHECK(cfg.get_int("grid.d", 2) == 2);
    CHECK(cfg.get_int("grid.n", 128) == 64);
    CHECK(cfg.get_string("missing", "x") == "x");
    CHECK(cfg.get_bool("missing", false) == false);
    CHECK(cfg.get_u64("missing", 7ULL) == 7ULL);
    CHECK(cfg.get_double_list("missing", {4.0}) == std::vector<double>{4.0});
  }

  SECTION("typed access rejects malformed values") {
    CHECK_THROWS_AS(cfg.get_string("absent"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.get_double("datum.name"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.get_int("solver.tol"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.get_bool("grid.n"), std::invalid_argument);
    CHECK_THROWS_AS(cfg.get_u64("datum.name"), std::invalid_argument);
  }

  SECTION("echo is sorted and canonical") {
    Config small = parse_config("b = 2\na = 1\n");
    CHECK(small.echo() == "a = 1\nb = 2\n");
  }
}

TEST_CASE("config parse errors") {
  CHECK_THROWS_AS(parse_config("no equals sign\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("= value\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("k = 1\nk = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("x = 1,,2\n").get_double_list("x"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/nsbesov.cfg"), std::runtime_error);
}

TEST_CASE("grid and spec triplets") {
  Grid g = parse_grid_triplet("2, 64, 1.0");
  CHECK(g.d == 2);
  CHECK(g.n == 64);
  CHECK(g.box == 1.0);
  CHECK_THROWS_AS(parse_grid_triplet("2,64"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid_triplet("2,31,1.0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid_triplet("x,64,1.0"), std::invalid_argument);

  BesovSpec s = parse_spec_triplet("0, 2, inf");
  CHECK(s.s == 0.0);
  CHECK(s.p == 2.0);
  CHECK(std::isinf(s.r));
  BesovSpec t = parse_spec_triplet("1.5,1,4");
  CHECK(t.s == 1.5);
  CHECK(t.p == 1.0);
  CHECK(t.r == 4.0);
  CHECK_THROWS_AS(parse_spec_triplet("0,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec_triplet("0,2,huge"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec_triplet("0,0.5,2"), std::invalid_argument);
}

TEST_CASE("config file round-trip") {
  fs::path dir = fs::temp_directory_path() / "nsbesov_cfg_test";
  ensure_directory(dir.string());
  fs::path file = dir / "run.cfg";
  write_text_file(file.string(), "grid.n = 32\nsolver.M = 16\n");
  Config cfg = load_config(file.string());
  CHECK(cfg.get_int("grid.n") == 32);
  CHECK(cfg.get_int("solver.M") == 16);
  fs::remove_all(dir);
}

TEST_CASE("17-digit scientific rendering") {
  CHECK(format_sci17(1.0) == "1.0000000000000000e+00");
  CHECK(format_sci17(-0.5) == "-5.0000000000000000e-01");
  CHECK(format_sci17(0.0) == "0.0000000000000000e+00");
  for (double v : {1.0 / 3.0, 6.02214076e23, 1e-300, 2.506628274631000502}) {
    CHECK(std::stod(format_sci17(v)) == v);  // round-trip exact
  }
}

TEST_CASE("CSV accumulation and layout") {
  CsvWriter csv({"case", "eps", "ratio"});
  csv.row({"0", format_sci17(0.25), format_sci17(2.0)});
  csv.row({"1", format_sci17(0.125), format_sci17(2.5)});
  CHECK(csv.text() ==
        "case,eps,ratio\n"
        "0,2.5000000000000000e-01,2.0000000000000000e+00\n"
        "1,1.2500000000000000e-01,2.5000000000000000e+00\n");
  CHECK_THROWS_AS(csv.row({"too", "short"}), std::invalid_argument);

  fs::path dir = fs::temp_directory_path() / "nsbesov_csv_test";
  ensure_directory(dir.string());
  fs::path file = dir / "t.csv";
  csv.write(file.string());
  CHECK(slurp(file) == csv.text());
  fs::remove_all(dir);
}

TEST_CASE("plot data and JSON files") {
  fs::path dir = fs::temp_directory_path() / "nsbesov_report_test";
  ensure_directory(dir.string());

  fs::path dat = dir / "p.dat";
  write_plot_data(dat.string(), {{0.0, 1.0}, {1.0, 0.5}});
  CHECK(slurp(dat) ==
        "0.0000000000000000e+00 1.0000000000000000e+00\n"
        "1.0000000000000000e+00 5.0000000000000000e-01\n");

  ordered_json j;
  j["zeta"] = 1;
  j["alpha"] = "two";
  fs::path jf = dir / "s.json";
  write_json_file(jf.string(), j);
  const std::string text = slurp(jf);
  CHECK(text == j.dump(2) + "\n");
  // Insertion order survives serialization.
  CHECK(text.find("zeta") < text.find("alpha"));

  fs::remove_all(dir);
}

TEST_CASE("environment fingerprint is deterministic and timestamp-free") {
  ordered_json a = environment_fingerprint();
  ordered_json b = environment_fingerprint();
  CHECK(a == b);
  CHECK(a.contains("library"));
  CHECK(a.contains("compiler"));
  CHECK(a.contains("fftw"));
  const std::string dumped = a.dump();
  CHECK(dumped.find("time") == std::string::npos);
}
