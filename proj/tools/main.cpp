#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "effham/experiment.hpp"
#include "effham/numfmt.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = 1;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Path to the JSON run configuration")
      ->required();
  cmd->add_option("--out", args.out_dir, "Output directory (default: config output.dir)");
  cmd->add_option("--threads", args.threads, "Worker threads for grid evaluation")
      ->check(CLI::PositiveNumber);
}

std::string resolve_out(const CommonArgs& args, const effham::ExperimentConfig& config) {
  return args.out_dir.empty() ? config.output_dir : args.out_dir;
}

void warn_on_weak_field(const effham::ExperimentConfig& config) {
  effham::TFIMParams params{config.model.n_sites, config.model.delta, config.model.j};
  if (!effham::is_perturbative_regime(params))
    std::cerr << "warning: delta < 5 J; the second-order effective chain is a poor"
                 " approximation in this regime\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search toolkit for optimal effective Hamiltonians"};
  app.require_subcommand(1);

  CommonArgs scan_args, grover_args, variational_args, oracle_args;
  std::string scan_method;

  CLI::App* scan_cmd =
      app.add_subcommand("scan", "Fidelity landscape over the coupling grid");
  attach_common(scan_cmd, scan_args);
  scan_cmd->add_option("--method", scan_method,
                       "Override the scan method: exact, trotter or variational");

  CLI::App* grover_cmd =
      app.add_subcommand("grover", "Amplified search over candidate couplings");
  attach_common(grover_cmd, grover_args);

  CLI::App* variational_cmd =
      app.add_subcommand("variational", "McLachlan trajectory for one candidate");
  attach_common(variational_cmd, variational_args);

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Reference fixtures from dense linear algebra");
  attach_common(oracle_cmd, oracle_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    using effham::ExperimentConfig;
    if (scan_cmd->parsed()) {
      ExperimentConfig config = ExperimentConfig::from_file(scan_args.config_path);
      warn_on_weak_field(config);
      std::optional<std::string> method_override;
      if (!scan_method.empty()) method_override = scan_method;
      auto summary = effham::run_scan(config, resolve_out(scan_args, config), scan_args.threads,
                                      method_override);
      const auto& best = summary.result.points[static_cast<std::size_t>(
          summary.result.best_index)];
      std::cout << "scan (" << summary.method << "): best f_ave "
                << effham::format_double(best.f_ave) << " at lambda "
                << effham::format_double(best.lambda) << ", kappa "
                << effham::format_double(best.kappa) << "\n";
    } else if (grover_cmd->parsed()) {
      ExperimentConfig config = ExperimentConfig::from_file(grover_args.config_path);
      warn_on_weak_field(config);
      auto summary =
          effham::run_grover(config, resolve_out(grover_args, config), grover_args.threads);
      if (summary.report.no_marked)
        std::cerr << "warning: no candidate fidelity clears the threshold\n";
      std::cout << "grover: candidate " << summary.best_label << " (lambda "
                << effham::format_double(summary.best_lambda) << ", kappa "
                << effham::format_double(summary.best_kappa) << ") probability "
                << effham::format_double(summary.best_probability) << " after "
                << summary.report.iterations_used << " iterations\n";
    } else if (variational_cmd->parsed()) {
      ExperimentConfig config = ExperimentConfig::from_file(variational_args.config_path);
      warn_on_weak_field(config);
      auto summary = effham::run_variational(config, resolve_out(variational_args, config));
      std::cout << "variational: final f_ave "
                << effham::format_double(summary.trajectory.f_ave.back());
      if (!summary.trotter_f_ave.empty())
        std::cout << ", max deviation from trotter reference "
                  << effham::format_double(summary.max_deviation);
      std::cout << "\n";
    } else if (oracle_cmd->parsed()) {
      ExperimentConfig config = ExperimentConfig::from_file(oracle_args.config_path);
      warn_on_weak_field(config);
      effham::run_oracle(config, resolve_out(oracle_args, config), oracle_args.threads);
      std::cout << "oracle: fixtures written to " << resolve_out(oracle_args, config) << "\n";
    }
  } catch (const effham::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const effham::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
