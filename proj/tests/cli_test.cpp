#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nonlocal/cli.hpp"
#include "nonlocal/config.hpp"
#include "nonlocal/errors.hpp"
#include "oracles.hpp"

using namespace nonlocal;

namespace {

const char* kExpConfig = R"json({
  "k": 1,
  "f": ["-x1"],
  "g": [{"jump0": 1.0, "atoms": [], "jump1": 0.0, "density": "0"}],
  "h": ["u1-0.5"],
  "R": 1.0
})json";

const char* kPeriodicConfig = R"json({
  "k": 1,
  "f": ["-x1+cos(2*pi*t)"],
  "g": [{"jump0": 1.0, "jump1": -1.0}],
  "h": ["u1"],
  "R": 2.0
})json";

const char* kBadSignConfig = R"json({
  "k": 1,
  "f": ["x1"],
  "g": [{"jump0": 1.0}],
  "h": ["u1-0.5"],
  "R": 1.0
})json";

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("loads the exponential oracle config") {
    const LoadedProblem lp = load_problem_config(kExpConfig);
    CHECK(lp.problem.k == 1);
    CHECK(lp.R == 1.0);
    CHECK(lp.solver.steps == 1000);
    CHECK_FALSE(lp.certify_r.has_value());
  }

  TEST_CASE("solver overrides are applied and validated") {
    const std::string text = R"json({
      "k": 1, "f": ["-x1"], "g": [{"jump0": 1}], "h": ["u1"], "R": 1,
      "solver": {"steps": 500, "seed_grid_per_axis": 5, "newton_tol": 1e-9,
                 "lambda_schedule": [0.5, 1.0], "reg_schedule": [2, 4], "cauchy_tol": 1e-5}
    })json";
    const LoadedProblem lp = load_problem_config(text);
    CHECK(lp.solver.steps == 500);
    CHECK(lp.solver.seed_grid_per_axis == 5);
    CHECK(lp.solver.newton_tol == 1e-9);
    CHECK(lp.solver.lambda_schedule == std::vector<double>{0.5, 1.0});
    CHECK(lp.solver.reg_schedule == std::vector<int>{2, 4});
  }

  TEST_CASE("errors carry JSON paths") {
    auto expect_path = [](const std::string& text, const std::string& needle) {
      try {
        load_problem_config(text);
        CHECK(false);
      } catch (const ConfigError& e) {
        CAPTURE(e.what());
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
      }
    };
    expect_path(R"json({"f": [], "g": [], "h": [], "R": 1})json", "$.k");
    expect_path(R"json({"k": 1, "f": ["-x1", "x1"], "g": [{}], "h": ["u1"], "R": 1})json", "$.f");
    expect_path(R"json({"k": 1, "f": ["-x1"], "g": [{}], "h": ["u1"], "R": -1})json", "$.R");
    expect_path(R"json({"k": 1, "f": ["-x1("], "g": [{}], "h": ["u1"], "R": 1})json", "$.f[0]");
    expect_path(R"json({"k": 1, "f": ["-x1"], "g": [{"atoms": [[2, 1]]}], "h": ["u1"], "R": 1})json",
                "$.g");
    expect_path(R"json({"k": 1, "f": ["-y1"], "g": [{}], "h": ["u1"], "R": 1})json", "$.f");
    expect_path("not json at all", "$");
  }

  TEST_CASE("certificate JSON round-trips") {
    const ExistenceCertificate cert = certify(oracle::exp_oracle_problem(), 1.0);
    const std::string text = certificate_to_json(cert, 2);
    const ExistenceCertificate back = certificate_from_json(text);
    CHECK(certificate_to_json(back, 2) == text);
    CHECK(back.status == CertStatus::Certified);
    CHECK(back.degree.value == 1);
    CHECK(std::isinf(back.cond_ii.min_h_norm));  // vacuous annulus -> null -> inf
  }

  TEST_CASE("solution JSON round-trips") {
    const auto sols = solve_direct(oracle::exp_oracle_problem(), 1.0, SolverConfig{});
    const std::string text = solution_to_json(sols[0], 2);
    const Solution back = solution_from_json(text);
    CHECK(solution_to_json(back, 2) == text);
    CHECK(back.c == sols[0].c);
  }

  TEST_CASE("degree JSON round-trips") {
    const DegreeResult d = degree(BoundaryMap(1, {expr::parse("u1")}), 1.0);
    const std::string text = degree_to_json(d, 2);
    const DegreeResult back = degree_from_json(text);
    CHECK(degree_to_json(back, 2) == text);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("certify the exponential oracle: exit 0, certified JSON") {
    const auto path = write_temp("nlbvp_exp.json", kExpConfig);
    const RunResult r = run_cli({"certify", path.string()});
    CHECK(r.code == 0);
    const ExistenceCertificate cert = certificate_from_json(r.out);
    CHECK(cert.status == CertStatus::Certified);
    CHECK(cert.bounds.r_minus == doctest::Approx(1.0));
    CHECK(cert.bounds.r_plus == doctest::Approx(1.0));
    CHECK(cert.degree.value == 1);
  }

  TEST_CASE("certify a bad sign: exit 2 with a cond_i witness") {
    const auto path = write_temp("nlbvp_badsign.json", kBadSignConfig);
    const RunResult r = run_cli({"certify", path.string()});
    CHECK(r.code == 2);
    const ExistenceCertificate cert = certificate_from_json(r.out);
    CHECK(cert.status == CertStatus::Failed);
    CHECK_FALSE(cert.cond_i.pass);
    CHECK(cert.cond_i.witness_x.size() == 1);
  }

  TEST_CASE("solve the periodic problem writes solution JSON and a CSV") {
    const auto cfg = write_temp("nlbvp_periodic.json", kPeriodicConfig);
    const auto csv = std::filesystem::temp_directory_path() / "nlbvp_traj.csv";
    const RunResult r = run_cli({"solve", cfg.string(), "--out", csv.string()});
    REQUIRE(r.code == 0);
    // c appears in the solutions array; fish it out via the parse-back helper.
    const auto pos = r.out.find("\"solutions\"");
    REQUIRE(pos != std::string::npos);

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x1");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) ++rows;
    CHECK(rows == 1001);
    std::filesystem::remove(csv);
  }

  TEST_CASE("reduce emits a first-order config that solve accepts") {
    const char* second_order = R"json({
      "reduction": "second_order",
      "k": 1,
      "f2": ["-y1"],
      "h1": ["u1"],
      "h2": ["u2-1"],
      "g1": [{"jump0": 1}],
      "g2": [{"jump0": 1}],
      "R": 2.0
    })json";
    const auto path = write_temp("nlbvp_so.json", second_order);
    const RunResult reduced = run_cli({"reduce", path.string()});
    REQUIRE(reduced.code == 0);

    const LoadedProblem lp = load_problem_config(reduced.out);
    CHECK(lp.problem.k == 2);
    CHECK(lp.R == 2.0);

    const auto path2 = write_temp("nlbvp_so_reduced.json", reduced.out);
    const RunResult solved = run_cli({"solve", path2.string()});
    CHECK(solved.code == 0);
    CHECK(solved.out.find("\"solutions\"") != std::string::npos);
  }

  TEST_CASE("degree subcommand") {
    const auto path = write_temp("nlbvp_deg.json", R"json({"k": 2,
      "h": ["u1^2-u2^2", "2*u1*u2"], "r": 1.0})json");
    const RunResult r = run_cli({"degree", path.string()});
    REQUIRE(r.code == 0);
    const DegreeResult d = degree_from_json(r.out);
    CHECK(d.value == 2);
    CHECK(d.certified);

    const auto prod = write_temp("nlbvp_degp.json", R"json({"k": 1,
      "h1": ["u1"], "h2": ["u1^3"]})json");
    const RunResult rp = run_cli({"degree", prod.string(), "--r", "1.0"});
    REQUIRE(rp.code == 0);
    CHECK(degree_from_json(rp.out).value == 1);

    const auto bad = write_temp("nlbvp_degbad.json", R"json({"k": 1, "h": ["u1-1"], "r": 1.0})json");
    CHECK(run_cli({"degree", bad.string()}).code == 2);
  }

  TEST_CASE("integrate subcommand emits a CSV and an error estimate") {
    const auto path = write_temp("nlbvp_ivp.json", R"json({"k": 1, "f": ["-x1"], "c": [1.0]})json");
    const RunResult r = run_cli({"integrate", path.string(), "--steps", "100"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,x1\n", 0) == 0);
    CHECK(r.err.find("error estimate") != std::string::npos);
    std::size_t rows = 0;
    for (char ch : r.out)
      if (ch == '\n') ++rows;
    CHECK(rows == 102);  // header + 101 nodes
  }

  TEST_CASE("usage errors exit with 1") {
    CHECK(run_cli({"unknown-subcommand"}).code == 1);
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"certify", "/nonexistent/path.json"}).code == 1);
    const auto bad = write_temp("nlbvp_badcfg.json", R"json({"k": 0})json");
    CHECK(run_cli({"certify", bad.string()}).code == 1);
  }

  TEST_CASE("selftest is deterministic byte-for-byte and passes") {
    const RunResult a = run_cli({"selftest"});
    const RunResult b = run_cli({"selftest"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"all_pass\": true") != std::string::npos);
  }
}

TEST_SUITE("cli-options") {
  TEST_CASE("certify_r from the config picks the degree radius") {
    const char* cfg = R"json({
      "k": 1,
      "f": ["-x1+cos(2*pi*t)"],
      "g": [{"jump0": 1.0, "jump1": -1.0}],
      "h": ["u1"],
      "R": 2.0,
      "certify_r": 3.0
    })json";
    const auto path = write_temp("nlbvp_certr.json", cfg);
    const RunResult r = run_cli({"certify", path.string()});
    REQUIRE(r.code == 0);
    CHECK(certificate_from_json(r.out).chosen_r == 3.0);

    // --r overrides the config value.
    const RunResult r2 = run_cli({"certify", path.string(), "--r", "2.0"});
    REQUIRE(r2.code == 0);
    CHECK(certificate_from_json(r2.out).chosen_r == 2.0);
  }
}
