#include "effham/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "effham/numfmt.hpp"
#include "effham/parallel.hpp"

namespace effham {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

// --- config parsing -------------------------------------------------------

[[noreturn]] void config_fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void check_keys(const ordered_json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* k : allowed)
      if (key == k) known = true;
    if (!known) config_fail(path, "unknown key '" + key + "'");
  }
}

const ordered_json* find(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const ordered_json& require(const ordered_json& obj, const std::string& path, const char* key) {
  const ordered_json* v = find(obj, key);
  if (!v) config_fail(path, "missing required key '" + std::string(key) + "'");
  return *v;
}

double number_at(const ordered_json& obj, const std::string& path, const char* key) {
  const ordered_json& v = require(obj, path, key);
  if (!v.is_number()) config_fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const ordered_json& obj, const std::string& path, const char* key,
                 double fallback) {
  const ordered_json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) config_fail(path + "." + key, "expected a number");
  return v->get<double>();
}

int int_at(const ordered_json& obj, const std::string& path, const char* key) {
  const ordered_json& v = require(obj, path, key);
  if (!v.is_number_integer()) config_fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

int int_or(const ordered_json& obj, const std::string& path, const char* key, int fallback) {
  const ordered_json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) config_fail(path + "." + key, "expected an integer");
  return v->get<int>();
}

bool bool_or(const ordered_json& obj, const std::string& path, const char* key, bool fallback) {
  const ordered_json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) config_fail(path + "." + key, "expected a boolean");
  return v->get<bool>();
}

std::string string_or(const ordered_json& obj, const std::string& path, const char* key,
                      const std::string& fallback) {
  const ordered_json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) config_fail(path + "." + key, "expected a string");
  return v->get<std::string>();
}

std::pair<double, double> range_at(const ordered_json& obj, const std::string& path,
                                   const char* key) {
  const ordered_json& v = require(obj, path, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    config_fail(path + "." + key, "expected [lo, hi]");
  double lo = v[0].get<double>(), hi = v[1].get<double>();
  if (!(lo <= hi)) config_fail(path + "." + key, "range must satisfy lo <= hi");
  return {lo, hi};
}

std::pair<int, int> steps_at(const ordered_json& obj, const std::string& path) {
  const ordered_json& v = require(obj, path, "steps");
  if (v.is_number_integer()) {
    int s = v.get<int>();
    if (s < 1) config_fail(path + ".steps", "must be >= 1");
    return {s, s};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    int a = v[0].get<int>(), b = v[1].get<int>();
    if (a < 1 || b < 1) config_fail(path + ".steps", "must be >= 1");
    return {a, b};
  }
  config_fail(path + ".steps", "expected an integer or [lambda_steps, kappa_steps]");
}

ModelConfig parse_model(const ordered_json& obj) {
  check_keys(obj, "$.model", {"name", "N", "delta", "J"});
  std::string name = string_or(obj, "$.model", "name", "tfim");
  if (name != "tfim") config_fail("$.model.name", "only 'tfim' is supported");
  ModelConfig m;
  m.n_sites = int_at(obj, "$.model", "N");
  m.delta = number_at(obj, "$.model", "delta");
  m.j = number_at(obj, "$.model", "J");
  try {
    validate(TFIMParams{m.n_sites, m.delta, m.j});
  } catch (const std::invalid_argument& e) {
    config_fail("$.model", e.what());
  }
  return m;
}

TrialsConfig parse_trials(const ordered_json& obj, const ModelConfig& model) {
  check_keys(obj, "$.trials", {"initials", "time", "method", "trotter_steps", "tau"});
  TrialsConfig t;
  const ordered_json& initials = require(obj, "$.trials", "initials");
  if (!initials.is_array() || initials.empty())
    config_fail("$.trials.initials", "expected a nonempty array of state labels");
  for (const auto& entry : initials) {
    if (!entry.is_string()) config_fail("$.trials.initials", "entries must be strings");
    t.initials.push_back(entry.get<std::string>());
  }
  t.time = number_at(obj, "$.trials", "time");
  if (t.time < 0.0) config_fail("$.trials.time", "must be >= 0");
  std::string method = string_or(obj, "$.trials", "method", "exact");
  if (method == "exact") {
    t.method = EvolutionMethod::exact();
    if (find(obj, "trotter_steps") || find(obj, "tau"))
      config_fail("$.trials", "trotter_steps/tau only apply to method 'trotter'");
  } else if (method == "trotter") {
    if (const ordered_json* steps = find(obj, "trotter_steps")) {
      if (!steps->is_number_integer() || steps->get<int>() < 1)
        config_fail("$.trials.trotter_steps", "expected an integer >= 1");
      t.method = EvolutionMethod::trotter(steps->get<int>());
    } else {
      double tau = number_at(obj, "$.trials", "tau");
      if (!(tau > 0.0)) config_fail("$.trials.tau", "must be > 0");
      t.method = EvolutionMethod::trotter(
          std::max(1, static_cast<int>(std::llround(t.time / tau))));
    }
  } else {
    config_fail("$.trials.method", "expected 'exact' or 'trotter'");
  }
  (void)model;
  return t;
}

GridAxis axis_of(std::pair<double, double> range, int steps) {
  return GridAxis{range.first, range.second, steps};
}

ScanConfig parse_scan(const ordered_json& obj) {
  check_keys(obj, "$.scan",
             {"lambda_range", "kappa_range", "steps", "method", "tau", "dt", "layers"});
  ScanConfig s;
  auto [ls, ks] = steps_at(obj, "$.scan");
  s.lambda_axis = axis_of(range_at(obj, "$.scan", "lambda_range"), ls);
  s.kappa_axis = axis_of(range_at(obj, "$.scan", "kappa_range"), ks);
  std::string method = string_or(obj, "$.scan", "method", "exact");
  if (method == "exact") s.method = ScanMethod::Exact;
  else if (method == "trotter") s.method = ScanMethod::Trotter;
  else if (method == "variational") s.method = ScanMethod::Variational;
  else config_fail("$.scan.method", "expected 'exact', 'trotter' or 'variational'");
  s.tau = number_or(obj, "$.scan", "tau", s.tau);
  if (!(s.tau > 0.0)) config_fail("$.scan.tau", "must be > 0");
  s.dt = number_or(obj, "$.scan", "dt", s.dt);
  if (!(s.dt > 0.0)) config_fail("$.scan.dt", "must be > 0");
  s.layers = int_or(obj, "$.scan", "layers", s.layers);
  if (s.layers < 1) config_fail("$.scan.layers", "must be >= 1");
  return s;
}

SearchConfig parse_search(const ordered_json& obj) {
  check_keys(obj, "$.search",
             {"lambda_range", "kappa_range", "steps", "fidelity_threshold", "theta_threshold",
              "k", "iterations", "mode"});
  SearchConfig s;
  auto [ls, ks] = steps_at(obj, "$.search");
  s.lambda_axis = axis_of(range_at(obj, "$.search", "lambda_range"), ls);
  s.kappa_axis = axis_of(range_at(obj, "$.search", "kappa_range"), ks);
  if (const ordered_json* f = find(obj, "fidelity_threshold")) {
    if (!f->is_number()) config_fail("$.search.fidelity_threshold", "expected a number");
    s.fidelity_threshold = f->get<double>();
    if (*s.fidelity_threshold < 0.0 || *s.fidelity_threshold > 1.0)
      config_fail("$.search.fidelity_threshold", "must lie in [0, 1]");
  }
  if (const ordered_json* th = find(obj, "theta_threshold")) {
    if (!th->is_number()) config_fail("$.search.theta_threshold", "expected a number");
    s.theta_threshold = th->get<double>();
    if (!(*s.theta_threshold > 0.0) || !(*s.theta_threshold < kPi))
      config_fail("$.search.theta_threshold", "must lie in (0, pi)");
  }
  if (s.fidelity_threshold.has_value() == s.theta_threshold.has_value())
    config_fail("$.search", "set exactly one of fidelity_threshold, theta_threshold");
  s.k = int_or(obj, "$.search", "k", s.k);
  if (s.k < 2 || s.k % 2 != 0) config_fail("$.search.k", "must be even and >= 2");
  if (const ordered_json* it = find(obj, "iterations")) {
    if (!it->is_number_integer() || it->get<int>() < 0)
      config_fail("$.search.iterations", "expected an integer >= 0");
    s.iterations = it->get<int>();
  }
  std::string mode = string_or(obj, "$.search", "mode", "leaky");
  if (mode == "leaky") s.mode = SearchMode::Leaky;
  else if (mode == "ideal") s.mode = SearchMode::Ideal;
  else config_fail("$.search.mode", "expected 'leaky' or 'ideal'");
  return s;
}

double coupling_at(const ordered_json& obj, const std::string& path, const char* key,
                   const ModelConfig& model, bool kappa) {
  const ordered_json& v = require(obj, path, key);
  if (v.is_string()) {
    if (v.get<std::string>() != "exact")
      config_fail(path + "." + key, "expected a number or 'exact'");
    if (model.delta == 0.0)
      config_fail(path + "." + key, "exact coefficients need delta != 0");
    EffectiveParams p = exact_sw_coefficients(model.delta, model.j);
    return kappa ? p.kappa : p.lambda;
  }
  if (!v.is_number()) config_fail(path + "." + key, "expected a number or 'exact'");
  return v.get<double>();
}

VariationalRunConfig parse_variational(const ordered_json& obj, const ModelConfig& model) {
  check_keys(obj, "$.variational",
             {"lambda", "kappa", "t_final", "dt", "layers", "regularization",
              "trotter_reference", "emit_parameters"});
  VariationalRunConfig v;
  v.lambda = coupling_at(obj, "$.variational", "lambda", model, false);
  v.kappa = coupling_at(obj, "$.variational", "kappa", model, true);
  v.t_final = number_at(obj, "$.variational", "t_final");
  if (v.t_final < 0.0) config_fail("$.variational.t_final", "must be >= 0");
  v.dt = number_or(obj, "$.variational", "dt", v.dt);
  if (!(v.dt > 0.0)) config_fail("$.variational.dt", "must be > 0");
  v.layers = int_or(obj, "$.variational", "layers", v.layers);
  if (v.layers < 1) config_fail("$.variational.layers", "must be >= 1");
  v.regularization = number_or(obj, "$.variational", "regularization", v.regularization);
  if (v.regularization < 0.0) config_fail("$.variational.regularization", "must be >= 0");
  v.trotter_reference = bool_or(obj, "$.variational", "trotter_reference", false);
  v.emit_parameters = bool_or(obj, "$.variational", "emit_parameters", false);
  return v;
}

OracleConfig parse_oracle(const ordered_json& obj) {
  check_keys(obj, "$.oracle", {"k", "threshold_spacings", "curve_samples"});
  OracleConfig o;
  o.k = int_or(obj, "$.oracle", "k", o.k);
  if (o.k < 2 || o.k % 2 != 0) config_fail("$.oracle.k", "must be even and >= 2");
  o.threshold_spacings = number_or(obj, "$.oracle", "threshold_spacings", o.threshold_spacings);
  if (!(o.threshold_spacings > 0.0) || !(o.threshold_spacings < o.k / 2.0))
    config_fail("$.oracle.threshold_spacings", "must lie in (0, K/2)");
  o.curve_samples = int_or(obj, "$.oracle", "curve_samples", o.curve_samples);
  if (o.curve_samples < 1) config_fail("$.oracle.curve_samples", "must be >= 1");
  return o;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const ordered_json& j) {
  check_keys(j, "$", {"model", "trials", "scan", "search", "variational", "oracle", "output"});
  ExperimentConfig config;
  config.raw = j;
  config.model = parse_model(require(j, "$", "model"));
  config.trials = parse_trials(require(j, "$", "trials"), config.model);
  if (const ordered_json* scan = find(j, "scan")) config.scan = parse_scan(*scan);
  if (const ordered_json* search = find(j, "search")) config.search = parse_search(*search);
  if (const ordered_json* variational = find(j, "variational"))
    config.variational = parse_variational(*variational, config.model);
  if (const ordered_json* oracle = find(j, "oracle")) config.oracle = parse_oracle(*oracle);
  if (const ordered_json* output = find(j, "output")) {
    if (output->is_string()) {
      config.output_dir = output->get<std::string>();
    } else {
      check_keys(*output, "$.output", {"dir"});
      config.output_dir = string_or(*output, "$.output", "dir", config.output_dir);
    }
    if (config.output_dir.empty()) config_fail("$.output", "must be a nonempty path");
  }
  // Trial state labels are resolved eagerly so bad labels fail validation.
  resolve_trials(config.model, config.trials);
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

TrialSet resolve_trials(const ModelConfig& model, const TrialsConfig& trials) {
  std::vector<Trial> list;
  list.reserve(trials.initials.size());
  for (const std::string& label : trials.initials) {
    if (label.rfind("x_", 0) == 0) {
      int site = 0;
      try {
        site = std::stoi(label.substr(2));
      } catch (const std::exception&) {
        throw ConfigError("$.trials.initials: bad label '" + label + "'");
      }
      if (site < 1 || site > model.n_sites)
        throw ConfigError("$.trials.initials: site in '" + label + "' outside 1.." +
                          std::to_string(model.n_sites));
      list.push_back({StateVector::basis_state(
                          model.n_sites, std::uint64_t{1} << (model.n_sites - site)),
                      trials.time});
      continue;
    }
    if (static_cast<int>(label.size()) != model.n_sites)
      throw ConfigError("$.trials.initials: bitstring '" + label + "' length != N");
    for (char c : label)
      if (c != '0' && c != '1')
        throw ConfigError("$.trials.initials: bad label '" + label + "'");
    list.push_back({StateVector::from_bitstring(label), trials.time});
  }
  return TrialSet(std::move(list));
}

// --- run products ----------------------------------------------------------

namespace {

class RunWriter {
 public:
  RunWriter(std::string command, const ExperimentConfig& config,
            std::filesystem::path out_dir)
      : command_(std::move(command)), config_echo_(config.raw), dir_(std::move(out_dir)) {}

  void add_file(const std::string& name, std::string bytes) {
    files_.emplace_back(name, std::move(bytes));
  }

  void add_timing(const std::string& label, double seconds) {
    timings_.push_back({label, seconds});
  }

  void finalize() {
    std::filesystem::create_directories(dir_);
    ordered_json manifest;
    manifest["command"] = command_;
    manifest["version"] = kVersion;
    manifest["config"] = config_echo_;
    manifest["timings"] = ordered_json::array();
    for (const auto& [label, seconds] : timings_)
      manifest["timings"].push_back({{"label", label}, {"seconds", seconds}});
    manifest["outputs"] = ordered_json::object();
    for (const auto& [name, bytes] : files_) manifest["outputs"][name] = fnv1a64_hex(bytes);
    for (const auto& [name, bytes] : files_) write_file(name, bytes);
    write_file("manifest.json", manifest.dump(2) + "\n");
  }

 private:
  void write_file(const std::string& name, const std::string& bytes) {
    std::filesystem::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write on '" + p.string() + "'");
  }

  std::string command_;
  ordered_json config_echo_;
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, double>> timings_;
  std::vector<std::pair<std::string, std::string>> files_;
};

class PhaseTimer {
 public:
  explicit PhaseTimer(RunWriter& writer, std::string label)
      : writer_(writer), label_(std::move(label)), start_(clock::now()) {}
  ~PhaseTimer() {
    writer_.add_timing(label_, std::chrono::duration<double>(clock::now() - start_).count());
  }

 private:
  using clock = std::chrono::steady_clock;
  RunWriter& writer_;
  std::string label_;
  clock::time_point start_;
};

std::string scan_method_name(ScanMethod method) {
  switch (method) {
    case ScanMethod::Exact: return "exact";
    case ScanMethod::Trotter: return "trotter";
    case ScanMethod::Variational: return "variational";
  }
  return "exact";
}

}  // namespace

ScanRunSummary run_scan(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                        int threads, const std::optional<std::string>& method_override) {
  if (!config.scan) throw ConfigError("$.scan: block required by the scan command");
  ScanConfig scan = *config.scan;
  if (method_override) {
    if (*method_override == "exact") scan.method = ScanMethod::Exact;
    else if (*method_override == "trotter") scan.method = ScanMethod::Trotter;
    else if (*method_override == "variational") scan.method = ScanMethod::Variational;
    else throw ConfigError("--method: expected 'exact', 'trotter' or 'variational'");
  }

  RunWriter writer("scan", config, out_dir);
  TrialSet trials = resolve_trials(config.model, config.trials);
  std::vector<StateVector> states;
  states.reserve(trials.size());
  for (const auto& t : trials.trials()) states.push_back(t.initial);

  ScanOptions options;
  options.tau = scan.tau;
  options.dt = scan.dt;
  options.layers = scan.layers;
  options.threads = threads;
  if (config.trials.method.kind == EvolutionMethod::Kind::Trotter)
    options.trotter_steps = config.trials.method.trotter_steps;

  TFIMParams model{config.model.n_sites, config.model.delta, config.model.j};
  ScanResult result;
  {
    PhaseTimer timer(writer, "landscape");
    result = landscape_scan(grid_points(scan.lambda_axis), grid_points(scan.kappa_axis), model,
                            states, config.trials.time, scan.method, options);
  }

  std::string method_name = scan_method_name(scan.method);
  std::string csv = "lambda,kappa,f_ave,method\n";
  for (const auto& p : result.points)
    csv += format_double_17(p.lambda) + "," + format_double_17(p.kappa) + "," +
           format_double_17(p.f_ave) + "," + method_name + "\n";
  writer.add_file("scan.csv", std::move(csv));
  writer.finalize();
  return {std::move(result), std::move(method_name)};
}

GroverRunSummary run_grover(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                            int threads) {
  if (!config.search) throw ConfigError("$.search: block required by the grover command");
  const SearchConfig& search = *config.search;

  RunWriter writer("grover", config, out_dir);
  TrialSet trials = resolve_trials(config.model, config.trials);
  TFIMParams model{config.model.n_sites, config.model.delta, config.model.j};

  CandidateSet candidates = candidate_grid(search.lambda_axis, search.kappa_axis, model.n_sites);
  {
    PhaseTimer timer(writer, "fidelity_cache");
    cache_fidelities(candidates, build_tfim(model), trials, config.trials.method, threads);
  }

  double theta_th = search.theta_threshold ? *search.theta_threshold
                                           : theta_of_fidelity(*search.fidelity_threshold);
  int n_marked = 0;
  for (int i = 0; i < candidates.size(); ++i)
    if (ideal_flip(candidates.theta(i), theta_th) < 0) ++n_marked;
  int iterations = search.iterations
                       ? *search.iterations
                       : (n_marked > 0 ? optimal_iterations(candidates.size(), n_marked) : 1);

  GroverRunSummary summary;
  {
    PhaseTimer timer(writer, "search");
    summary.report = run_search(candidates, theta_th, search.k, iterations, search.mode);
    summary.bound = error_bound(candidates, theta_th, search.k, iterations);
  }
  summary.theta_threshold = theta_th;
  summary.n_candidates = candidates.size();
  summary.n_marked = n_marked;
  summary.best_label = candidates.label(summary.report.best_index);
  summary.best_lambda = candidates.lambda_of(summary.report.best_index);
  summary.best_kappa = candidates.kappa_of(summary.report.best_index);
  summary.best_fidelity = candidates.fidelity(summary.report.best_index);
  summary.best_probability =
      summary.report.final_probabilities[static_cast<std::size_t>(summary.report.best_index)];

  std::string iterations_csv = "iteration,marked_probability,leaked_probability\n";
  for (const auto& row : summary.report.iterations)
    iterations_csv += std::to_string(row.iteration) + "," +
                      format_double_17(row.marked_probability) + "," +
                      format_double_17(row.leaked_probability) + "\n";
  writer.add_file("grover_iterations.csv", std::move(iterations_csv));

  std::string candidates_csv = "label,lambda,kappa,fidelity,theta,marked,probability\n";
  std::vector<bool> marked_flag(static_cast<std::size_t>(candidates.size()), false);
  for (int i : summary.report.marked) marked_flag[static_cast<std::size_t>(i)] = true;
  for (int i = 0; i < candidates.size(); ++i) {
    auto u = static_cast<std::size_t>(i);
    candidates_csv += std::to_string(candidates.label(i)) + "," +
                      format_double_17(candidates.lambda_of(i)) + "," +
                      format_double_17(candidates.kappa_of(i)) + "," +
                      format_double_17(candidates.fidelity(i)) + "," +
                      format_double_17(candidates.theta(i)) + "," +
                      (marked_flag[u] ? "1" : "0") + "," +
                      format_double_17(summary.report.final_probabilities[u]) + "\n";
  }
  writer.add_file("grover_candidates.csv", std::move(candidates_csv));

  ordered_json sj;
  sj["mode"] = search.mode == SearchMode::Leaky ? "leaky" : "ideal";
  sj["k"] = search.k;
  sj["theta_threshold"] = theta_th;
  sj["iterations_used"] = iterations;
  sj["n_candidates"] = summary.n_candidates;
  sj["n_marked"] = summary.n_marked;
  sj["no_marked"] = summary.report.no_marked;
  sj["best"] = {{"label", summary.best_label},
                {"lambda", summary.best_lambda},
                {"kappa", summary.best_kappa},
                {"fidelity", summary.best_fidelity},
                {"theta", candidates.theta(summary.report.best_index)},
                {"probability", summary.best_probability}};
  sj["leaked_probability"] = summary.report.iterations.back().leaked_probability;
  sj["error_bound"] = summary.bound;
  sj["marked_labels"] = ordered_json::array();
  for (int i : summary.report.marked) sj["marked_labels"].push_back(candidates.label(i));
  sj["within_radius_labels"] = ordered_json::array();
  for (int i : summary.report.within_radius)
    sj["within_radius_labels"].push_back(candidates.label(i));
  writer.add_file("grover_summary.json", sj.dump(2) + "\n");

  writer.finalize();
  return summary;
}

VariationalRunSummary run_variational(const ExperimentConfig& config,
                                      const std::filesystem::path& out_dir) {
  if (!config.variational)
    throw ConfigError("$.variational: block required by the variational command");
  const VariationalRunConfig& vc = *config.variational;

  RunWriter writer("variational", config, out_dir);
  TrialSet trials = resolve_trials(config.model, config.trials);
  TFIMParams model{config.model.n_sites, config.model.delta, config.model.j};
  HamiltonianSum h_test = subtract(
      build_tfim(model), build_sw_effective({vc.lambda, vc.kappa}, model.n_sites));

  AnsatzCircuit ansatz = AnsatzCircuit::trotter_layers(h_test, vc.layers);
  VariationalOptions options;
  options.t_final = vc.t_final;
  options.dt = vc.dt;
  options.lambda_reg = vc.regularization;
  options.store_parameters = vc.emit_parameters;

  VariationalRunSummary summary;
  {
    PhaseTimer timer(writer, "trajectory");
    summary.trajectory = evolve_trajectory(
        ansatz, Eigen::VectorXd::Zero(ansatz.n_parameters()), h_test, trials, options);
  }

  const auto n_steps = summary.trajectory.times.size();
  if (vc.trotter_reference) {
    PhaseTimer timer(writer, "trotter_reference");
    summary.trotter_f_ave.assign(n_steps, 0.0);
    for (const auto& trial : trials.trials()) {
      StateVector psi = trial.initial;
      for (std::size_t k = 0; k < n_steps; ++k) {
        if (k > 0) psi = trotter_evolve(h_test, psi, vc.dt, 1);
        summary.trotter_f_ave[k] += std::norm(inner_product(trial.initial, psi));
      }
    }
    for (double& f : summary.trotter_f_ave) f /= static_cast<double>(trials.size());
    for (std::size_t k = 0; k < n_steps; ++k)
      summary.max_deviation = std::max(
          summary.max_deviation, std::abs(summary.trajectory.f_ave[k] - summary.trotter_f_ave[k]));
  }

  std::string csv = "t,f_ave";
  if (vc.trotter_reference) csv += ",f_ave_trotter";
  if (vc.emit_parameters)
    for (std::size_t trial = 1; trial <= trials.size(); ++trial)
      for (int p = 0; p < ansatz.n_parameters(); ++p)
        csv += ",theta_t" + std::to_string(trial) + "_p" + std::to_string(p);
  csv += "\n";
  for (std::size_t k = 0; k < n_steps; ++k) {
    csv += format_double_17(summary.trajectory.times[k]) + "," +
           format_double_17(summary.trajectory.f_ave[k]);
    if (vc.trotter_reference) csv += "," + format_double_17(summary.trotter_f_ave[k]);
    if (vc.emit_parameters)
      for (const auto& theta : summary.trajectory.parameters)
        for (int p = 0; p < ansatz.n_parameters(); ++p)
          csv += "," + format_double_17(theta(static_cast<Eigen::Index>(k), p));
    csv += "\n";
  }
  writer.add_file("variational.csv", std::move(csv));
  writer.finalize();
  return summary;
}

nlohmann::ordered_json run_oracle(const ExperimentConfig& config,
                                  const std::filesystem::path& out_dir, int threads) {
  RunWriter writer("oracle", config, out_dir);
  TrialSet trials = resolve_trials(config.model, config.trials);
  TFIMParams model{config.model.n_sites, config.model.delta, config.model.j};
  HamiltonianSum h_full = build_tfim(model);
  EvolutionMethod exact = EvolutionMethod::exact();

  ordered_json fx;
  fx["version"] = kVersion;
  fx["model"] = {{"N", model.n_sites}, {"delta", model.delta}, {"J", model.j}};

  // Reference fidelities at the exact effective couplings.
  {
    PhaseTimer timer(writer, "trial_fidelities");
    EffectiveParams sw = exact_sw_coefficients(model.delta, model.j);
    HamiltonianSum h_test = subtract(h_full, build_sw_effective(sw, model.n_sites));
    std::vector<std::complex<double>> fs = trial_fidelities(h_test, trials, exact);
    ordered_json values = ordered_json::array();
    for (const auto& f : fs) values.push_back({f.real(), f.imag()});
    fx["trial_fidelities"] = {{"lambda", sw.lambda},
                              {"kappa", sw.kappa},
                              {"t", config.trials.time},
                              {"values", values},
                              {"overall", overall_fidelity(h_test, trials, exact)},
                              {"average", average_fidelity(h_test, trials, exact)},
                              {"composite", composite_fidelity(h_test, trials, exact)}};

    // Leakage out of the single-excitation span under the test evolution.
    ExactPropagator propagator(h_test);
    ordered_json leaks = ordered_json::array();
    double max_leak = 0.0;
    for (const auto& trial : trials.trials()) {
      StateVector evolved = propagator.evolve(trial.initial, trial.time);
      double inside = 0.0;
      for (int site = 1; site <= model.n_sites; ++site)
        inside += std::norm(
            evolved.amplitudes()[std::int64_t{1} << (model.n_sites - site)]);
      double leak = std::max(0.0, 1.0 - inside);
      leaks.push_back(leak);
      max_leak = std::max(max_leak, leak);
    }
    fx["subspace_leakage"] = {{"t", config.trials.time},
                              {"per_trial", leaks},
                              {"max", max_leak}};
  }

  // Fidelity landscape over the scan grid (or the default 9x9 window).
  {
    PhaseTimer timer(writer, "landscape");
    GridAxis la = config.scan ? config.scan->lambda_axis : GridAxis{0.8, 1.2, 9};
    GridAxis ka = config.scan ? config.scan->kappa_axis : GridAxis{0.01, 0.09, 9};
    std::vector<double> lambdas = grid_points(la), kappas = grid_points(ka);
    std::vector<double> f_ave(lambdas.size() * kappas.size());
    std::vector<double> f_overall(f_ave.size());
    detail::parallel_for(static_cast<int>(f_ave.size()), threads, [&](int index) {
      auto u = static_cast<std::size_t>(index);
      double lambda = lambdas[u % lambdas.size()];
      double kappa = kappas[u / lambdas.size()];
      HamiltonianSum h_test =
          subtract(h_full, build_sw_effective({lambda, kappa}, model.n_sites));
      std::vector<std::complex<double>> fs = trial_fidelities(h_test, trials, exact);
      std::complex<double> mean{0.0, 0.0};
      double avg = 0.0;
      for (const auto& f : fs) {
        mean += f;
        avg += std::norm(f);
      }
      f_overall[u] = std::abs(mean) / static_cast<double>(fs.size());
      f_ave[u] = avg / static_cast<double>(fs.size());
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < f_ave.size(); ++i)
      if (f_ave[i] > f_ave[best]) best = i;
    fx["landscape"] = {{"lambda", lambdas},
                       {"kappa", kappas},
                       {"t", config.trials.time},
                       {"f_ave", f_ave},
                       {"f_overall", f_overall},
                       {"argmax", {{"lambda", lambdas[best % lambdas.size()]},
                                   {"kappa", kappas[best / lambdas.size()]},
                                   {"f_ave", f_ave[best]}}}};
  }

  // Candidate angles over the search grid plus a marked-set threshold that
  // splits the best candidate from the runner-up.
  if (config.search) {
    PhaseTimer timer(writer, "search_thresholds");
    CandidateSet candidates =
        candidate_grid(config.search->lambda_axis, config.search->kappa_axis, model.n_sites);
    cache_fidelities(candidates, h_full, trials, config.trials.method, threads);
    std::vector<double> thetas;
    thetas.reserve(static_cast<std::size_t>(candidates.size()));
    for (int i = 0; i < candidates.size(); ++i) thetas.push_back(candidates.theta(i));
    std::vector<double> sorted = thetas;
    std::sort(sorted.begin(), sorted.end());
    double best = sorted[0];
    double second = sorted.size() > 1 ? sorted[1] : kPi;
    double suggested = 0.5 * (best + second);
    double spacing = 2.0 * kPi / config.search->k;
    double clearance = kPi;
    for (double th : sorted) clearance = std::min(clearance, std::abs(th - suggested));
    fx["search_thresholds"] = {{"k", config.search->k},
                               {"thetas", thetas},
                               {"best_theta", best},
                               {"second_theta", second},
                               {"suggested_theta_threshold", suggested},
                               {"suggested_fidelity_threshold", std::cos(0.5 * suggested)},
                               {"clearance_spacings", clearance / spacing}};
  }

  // Flip-coefficient curve around the threshold, direct-summation route.
  {
    PhaseTimer timer(writer, "phase_curve");
    int k = config.oracle.k;
    double spacing = 2.0 * kPi / k;
    double theta_th = config.oracle.threshold_spacings * spacing;
    ordered_json theta_col = ordered_json::array(), direct_col = ordered_json::array(),
                 closed_col = ordered_json::array(), eta_col = ordered_json::array();
    for (int i = 0; i < config.oracle.curve_samples; ++i) {
      double theta_x = 0.5 * spacing * i;
      theta_col.push_back(theta_x);
      direct_col.push_back(flip_coefficient_direct(theta_x, k, theta_th));
      closed_col.push_back(flip_coefficient(theta_x, k, theta_th));
      eta_col.push_back(ideal_flip(theta_x, theta_th));
    }
    fx["phase_curve"] = {{"k", k},
                         {"theta_threshold", theta_th},
                         {"theta_x", theta_col},
                         {"a_direct", direct_col},
                         {"a_closed", closed_col},
                         {"eta", eta_col}};
  }

  // Uniform-marked amplification profile, closed form.
  {
    int n = config.search ? config.search->lambda_axis.steps * config.search->kappa_axis.steps
                          : 64;
    int m = 1;
    double phi = std::asin(std::sqrt(static_cast<double>(m) / n));
    ordered_json probs = ordered_json::array();
    for (int j = 0; j <= 10; ++j) {
      double s = std::sin((2.0 * j + 1.0) * phi);
      probs.push_back(s * s);
    }
    fx["grover"] = {{"n", n},
                    {"m", m},
                    {"optimal_iterations", optimal_iterations(n, m)},
                    {"ideal_probabilities", probs}};
  }

  // First-order product-formula error against the exact propagator.
  {
    PhaseTimer timer(writer, "trotter_convergence");
    const StateVector& psi0 = trials.trials().front().initial;
    double t = 1.0;
    StateVector exact_state = exact_evolve(h_full, psi0, t);
    ordered_json ns = ordered_json::array(), errors = ordered_json::array(),
                 ratios = ordered_json::array();
    std::vector<double> error_values;
    for (int n = 100; n <= 1600; n *= 2) {
      StateVector approx = trotter_evolve(h_full, psi0, t, n);
      double err = (approx.amplitudes() - exact_state.amplitudes()).norm();
      ns.push_back(n);
      errors.push_back(err);
      error_values.push_back(err);
    }
    for (std::size_t i = 0; i + 1 < error_values.size(); ++i)
      ratios.push_back(error_values[i] / error_values[i + 1]);
    fx["trotter"] = {{"t", t}, {"n", ns}, {"errors", errors}, {"ratios", ratios}};
  }

  writer.add_file("fixtures.json", fx.dump(2) + "\n");
  writer.finalize();
  return fx;
}

}  // namespace effham
