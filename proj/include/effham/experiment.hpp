#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "effham/errors.hpp"
#include "effham/qpe_grover.hpp"
#include "effham/variational.hpp"

namespace effham {

inline constexpr const char* kVersion = "0.1.0";

struct ModelConfig {
  int n_sites = 2;
  double delta = 0.0;
  double j = 0.0;
};

struct TrialsConfig {
  std::vector<std::string> initials;  // "x_i" or a bitstring like "01000"
  double time = 0.0;
  EvolutionMethod method = EvolutionMethod::exact();
};

struct ScanConfig {
  GridAxis lambda_axis, kappa_axis;
  ScanMethod method = ScanMethod::Exact;
  double tau = 2.0 * std::numbers::pi / 1000.0;   // trotter slice
  double dt = 2.0 * std::numbers::pi / 1000.0;    // variational step
  int layers = 3;
};

struct SearchConfig {
  GridAxis lambda_axis, kappa_axis;
  std::optional<double> fidelity_threshold;  // exactly one of the two
  std::optional<double> theta_threshold;
  int k = 5000;
  std::optional<int> iterations;  // default: optimal for the measured M
  SearchMode mode = SearchMode::Leaky;
};

struct VariationalRunConfig {
  double lambda = 0.0, kappa = 0.0;
  double t_final = 0.0;
  double dt = 2.0 * std::numbers::pi / 1000.0;
  int layers = 3;
  double regularization = kDefaultRegularization;
  bool trotter_reference = false;
  bool emit_parameters = false;
};

struct OracleConfig {
  int k = 5000;
  double threshold_spacings = 10.0;  // theta_th in units of 2 pi / K
  int curve_samples = 81;
};

// Validated run configuration. Parsing rejects unknown keys and value
// domain violations with a ConfigError naming the offending JSON path.
struct ExperimentConfig {
  nlohmann::ordered_json raw;  // echoed into the run manifest
  ModelConfig model;
  TrialsConfig trials;
  std::optional<ScanConfig> scan;
  std::optional<SearchConfig> search;
  std::optional<VariationalRunConfig> variational;
  OracleConfig oracle;
  std::string output_dir = "out";

  static ExperimentConfig from_json(const nlohmann::ordered_json& j);
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

TrialSet resolve_trials(const ModelConfig& model, const TrialsConfig& trials);

struct ScanRunSummary {
  ScanResult result;
  std::string method;
};

struct GroverRunSummary {
  SearchReport report;
  double theta_threshold = 0.0;
  int n_candidates = 0;
  int n_marked = 0;
  int best_label = 0;
  double best_lambda = 0.0, best_kappa = 0.0;
  double best_fidelity = 0.0, best_probability = 0.0;
  double bound = 0.0;  // accumulated leaky-vs-ideal error bound
};

struct VariationalRunSummary {
  VariationalTrajectory trajectory;
  std::vector<double> trotter_f_ave;  // empty unless the reference was requested
  double max_deviation = 0.0;         // max_t |f_ave - trotter reference|
};

// Each runner writes its CSV/JSON products plus one manifest.json into
// out_dir and returns an in-memory summary.
ScanRunSummary run_scan(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                        int threads = 1,
                        const std::optional<std::string>& method_override = std::nullopt);
GroverRunSummary run_grover(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                            int threads = 1);
VariationalRunSummary run_variational(const ExperimentConfig& config,
                                      const std::filesystem::path& out_dir);
nlohmann::ordered_json run_oracle(const ExperimentConfig& config,
                                  const std::filesystem::path& out_dir, int threads = 1);

}  // namespace effham
