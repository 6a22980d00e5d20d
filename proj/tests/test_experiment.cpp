#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "effham/experiment.hpp"
#include "effham/numfmt.hpp"

using namespace effham;
using nlohmann::ordered_json;

namespace {

ordered_json minimal_config() {
  return ordered_json::parse(R"({
    "model": {"N": 3, "delta": 10.0, "J": 1.0},
    "trials": {"initials": ["x_1", "x_2", "x_3"], "time": 1.0}
  })");
}

std::string config_error_of(const ordered_json& j) {
  try {
    ExperimentConfig::from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "effham-tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults of a minimal config") {
  ExperimentConfig c = ExperimentConfig::from_json(minimal_config());
  CHECK(c.model.n_sites == 3);
  CHECK(c.model.delta == 10.0);
  CHECK(c.model.j == 1.0);
  CHECK(c.trials.time == 1.0);
  CHECK(c.trials.method.kind == EvolutionMethod::Kind::Exact);
  CHECK_FALSE(c.scan.has_value());
  CHECK_FALSE(c.search.has_value());
  CHECK_FALSE(c.variational.has_value());
  CHECK(c.oracle.k == 5000);
  CHECK(c.oracle.threshold_spacings == 10.0);
  CHECK(c.oracle.curve_samples == 81);
  CHECK(c.output_dir == "out");
}

TEST_CASE("unknown keys are rejected with their path") {
  ordered_json j = minimal_config();
  j["bogus"] = 1;
  CHECK(config_error_of(j) == "$: unknown key 'bogus'");

  j = minimal_config();
  j["model"]["coupling"] = 2.0;
  CHECK(config_error_of(j) == "$.model: unknown key 'coupling'");

  j = minimal_config();
  j["scan"] = {{"lambda_range", {0.8, 1.2}}, {"kappa_range", {0.01, 0.09}}, {"steps", 3},
               {"typo", true}};
  CHECK(config_error_of(j) == "$.scan: unknown key 'typo'");
}

TEST_CASE("domain violations carry the offending path") {
  ordered_json j = minimal_config();
  j["model"]["N"] = 1;
  CHECK(config_error_of(j).rfind("$.model", 0) == 0);

  j = minimal_config();
  j["trials"]["time"] = -0.5;
  CHECK(config_error_of(j) == "$.trials.time: must be >= 0");

  j = minimal_config();
  j["trials"]["trotter_steps"] = 10;  // method defaults to exact
  CHECK(config_error_of(j) == "$.trials: trotter_steps/tau only apply to method 'trotter'");

  j = minimal_config();
  j["search"] = {{"lambda_range", {0.8, 1.2}}, {"kappa_range", {0.01, 0.09}}, {"steps", 3},
                 {"theta_threshold", 0.4}, {"k", 7}};
  CHECK(config_error_of(j) == "$.search.k: must be even and >= 2");

  j["search"]["k"] = 100;
  j["search"]["fidelity_threshold"] = 0.9;  // both thresholds set
  CHECK(config_error_of(j) ==
        "$.search: set exactly one of fidelity_threshold, theta_threshold");

  j["search"].erase("fidelity_threshold");
  j["search"].erase("theta_threshold");
  CHECK(config_error_of(j) ==
        "$.search: set exactly one of fidelity_threshold, theta_threshold");

  j = minimal_config();
  j["variational"] = {{"lambda", "exact"}, {"kappa", "almost"}, {"t_final", 1.0}};
  CHECK(config_error_of(j) == "$.variational.kappa: expected a number or 'exact'");

  j = minimal_config();
  j["oracle"] = {{"threshold_spacings", 0.0}};
  CHECK(config_error_of(j) == "$.oracle.threshold_spacings: must lie in (0, K/2)");

  j = minimal_config();
  j["output"] = "";
  CHECK(config_error_of(j) == "$.output: must be a nonempty path");
}

TEST_CASE("exact coupling shorthand resolves against the model") {
  ordered_json j = minimal_config();
  j["variational"] = {{"lambda", "exact"}, {"kappa", "exact"}, {"t_final", 0.5}};
  ExperimentConfig c = ExperimentConfig::from_json(j);
  REQUIRE(c.variational.has_value());
  CHECK(c.variational->lambda == 1.0);
  CHECK(c.variational->kappa == 0.05);

  j["model"]["delta"] = 0.0;
  CHECK(config_error_of(j) == "$.variational.lambda: exact coefficients need delta != 0");
}

TEST_CASE("trial labels resolve to states or fail eagerly") {
  ordered_json j = minimal_config();
  j["trials"]["initials"] = {"x_1", "010"};
  ExperimentConfig c = ExperimentConfig::from_json(j);
  TrialSet trials = resolve_trials(c.model, c.trials);
  REQUIRE(trials.size() == 2);
  CHECK(std::abs(trials.trials()[0].initial.amplitudes()[4] - 1.0) == 0.0);
  CHECK(std::abs(trials.trials()[1].initial.amplitudes()[2] - 1.0) == 0.0);

  j["trials"]["initials"] = {"x_4"};
  CHECK(config_error_of(j) == "$.trials.initials: site in 'x_4' outside 1..3");
  j["trials"]["initials"] = {"01"};
  CHECK(config_error_of(j) == "$.trials.initials: bitstring '01' length != N");
  j["trials"]["initials"] = {"01a"};
  CHECK(config_error_of(j) == "$.trials.initials: bad label '01a'");
  j["trials"]["initials"] = {"x_one"};
  CHECK(config_error_of(j) == "$.trials.initials: bad label 'x_one'");
}

TEST_CASE("trotter trial method resolves its step count from tau") {
  ordered_json j = minimal_config();
  j["trials"]["method"] = "trotter";
  j["trials"]["tau"] = 0.1;
  ExperimentConfig c = ExperimentConfig::from_json(j);
  CHECK(c.trials.method.kind == EvolutionMethod::Kind::Trotter);
  CHECK(c.trials.method.trotter_steps == 10);  // round(time / tau)

  j["trials"].erase("tau");
  j["trials"]["trotter_steps"] = 64;
  c = ExperimentConfig::from_json(j);
  CHECK(c.trials.method.trotter_steps == 64);
}

TEST_CASE("per-axis step counts") {
  ordered_json j = minimal_config();
  j["scan"] = {{"lambda_range", {0.8, 1.2}}, {"kappa_range", {0.01, 0.09}}, {"steps", {5, 3}}};
  ExperimentConfig c = ExperimentConfig::from_json(j);
  REQUIRE(c.scan.has_value());
  CHECK(c.scan->lambda_axis.steps == 5);
  CHECK(c.scan->kappa_axis.steps == 3);
  CHECK(c.scan->lambda_axis.lo == 0.8);
  CHECK(c.scan->kappa_axis.hi == 0.09);
}

TEST_CASE("missing config file raises a config error") {
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/effham.json"), ConfigError);
}

TEST_CASE("scan run writes deterministic products") {
  ordered_json j = minimal_config();
  j["scan"] = {{"lambda_range", {0.9, 1.1}}, {"kappa_range", {0.03, 0.07}}, {"steps", 3}};
  ExperimentConfig c = ExperimentConfig::from_json(j);

  std::filesystem::path dir1 = fresh_dir("scan1");
  std::filesystem::path dir2 = fresh_dir("scan2");
  ScanRunSummary s1 = run_scan(c, dir1, 1);
  ScanRunSummary s2 = run_scan(c, dir2, 4);

  // exact coupling point wins on this grid
  CHECK(s1.result.points[s1.result.best_index].lambda == 1.0);
  CHECK(s1.result.points[s1.result.best_index].kappa == 0.05);
  CHECK(s1.method == "exact");

  // byte-identical across runs and thread counts
  std::string csv1 = slurp(dir1 / "scan.csv");
  CHECK(csv1 == slurp(dir2 / "scan.csv"));
  CHECK(csv1.rfind("lambda,kappa,f_ave,method\n", 0) == 0);

  // manifest digests match the file contents on disk
  ordered_json manifest = ordered_json::parse(slurp(dir1 / "manifest.json"));
  CHECK(manifest["command"] == "scan");
  CHECK(manifest["version"] == kVersion);
  CHECK(manifest["config"]["model"]["N"] == 3);
  CHECK(manifest["outputs"]["scan.csv"] == fnv1a64_hex(csv1));
  CHECK(ordered_json::parse(slurp(dir2 / "manifest.json"))["outputs"]["scan.csv"] ==
        manifest["outputs"]["scan.csv"]);

  // method override rewires the scan without touching the config
  std::filesystem::path dir3 = fresh_dir("scan3");
  ScanRunSummary s3 = run_scan(c, dir3, 1, std::string("trotter"));
  CHECK(s3.method == "trotter");
  CHECK_THROWS_AS(run_scan(c, dir3, 1, std::string("bogus")), ConfigError);

  ExperimentConfig no_scan = ExperimentConfig::from_json(minimal_config());
  CHECK_THROWS_AS(run_scan(no_scan, dir3, 1), ConfigError);
}

TEST_CASE("grover run finds the matched couplings on a small grid") {
  ordered_json j = minimal_config();
  j["trials"]["time"] = 2 * std::numbers::pi;
  j["search"] = {{"lambda_range", {0.7, 1.3}}, {"kappa_range", {0.01, 0.09}}, {"steps", 3},
                 {"fidelity_threshold", 0.97}, {"k", 2000}, {"mode", "leaky"}};
  ExperimentConfig c = ExperimentConfig::from_json(j);

  std::filesystem::path dir = fresh_dir("grover");
  GroverRunSummary g = run_grover(c, dir, 2);
  CHECK(g.n_candidates == 9);
  // grid nodes carry lerp rounding, so compare within an ulp-scale tolerance
  CHECK(std::abs(g.best_lambda - 1.0) < 1e-12);
  CHECK(std::abs(g.best_kappa - 0.05) < 1e-12);
  CHECK(g.best_probability > 0.5);
  CHECK(g.report.iterations.size() == static_cast<std::size_t>(g.report.iterations_used) + 1);

  ordered_json summary = ordered_json::parse(slurp(dir / "grover_summary.json"));
  CHECK(summary["best"]["label"] == g.best_label);
  CHECK(summary["n_marked"] == g.n_marked);
  CHECK(std::filesystem::exists(dir / "grover_iterations.csv"));
  CHECK(std::filesystem::exists(dir / "grover_candidates.csv"));
  CHECK(std::filesystem::exists(dir / "manifest.json"));

  ExperimentConfig no_search = ExperimentConfig::from_json(minimal_config());
  CHECK_THROWS_AS(run_grover(no_search, dir, 1), ConfigError);
}

TEST_CASE("variational run reports its deviation from the product formula") {
  ordered_json j = minimal_config();
  j["variational"] = {{"lambda", "exact"}, {"kappa", "exact"}, {"t_final", 0.3},
                      {"dt", 0.05}, {"layers", 2}, {"trotter_reference", true}};
  ExperimentConfig c = ExperimentConfig::from_json(j);

  std::filesystem::path dir = fresh_dir("variational");
  VariationalRunSummary v = run_variational(c, dir);
  REQUIRE(v.trajectory.times.size() == 7);
  CHECK(v.trotter_f_ave.size() == 7);
  CHECK(v.max_deviation < 0.05);
  CHECK(v.trajectory.f_ave.front() == doctest::Approx(1.0).epsilon(1e-12));

  std::string csv = slurp(dir / "variational.csv");
  CHECK(csv.rfind("t,f_ave,f_ave_trotter\n", 0) == 0);

  ExperimentConfig plain = ExperimentConfig::from_json(minimal_config());
  CHECK_THROWS_AS(run_variational(plain, dir), ConfigError);
}

TEST_CASE("oracle run emits the fixture sections") {
  ordered_json j = minimal_config();
  j["oracle"] = {{"k", 200}, {"threshold_spacings", 8.0}, {"curve_samples", 9}};
  ExperimentConfig c = ExperimentConfig::from_json(j);

  std::filesystem::path dir = fresh_dir("oracle");
  ordered_json fx = run_oracle(c, dir, 2);
  CHECK(fx.contains("trial_fidelities"));
  CHECK(fx.contains("subspace_leakage"));
  CHECK(fx.contains("landscape"));
  CHECK(fx.contains("phase_curve"));
  CHECK(fx.contains("trotter"));
  CHECK_FALSE(fx.contains("search_thresholds"));  // no search block configured
  CHECK(fx["trial_fidelities"]["lambda"] == 1.0);
  CHECK(fx["trial_fidelities"]["kappa"] == 0.05);
  CHECK(fx["phase_curve"]["theta_x"].size() == 9);

  std::string on_disk = slurp(dir / "fixtures.json");
  CHECK(ordered_json::parse(on_disk) == fx);
}
