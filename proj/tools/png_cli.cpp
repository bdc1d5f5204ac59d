#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "png/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pareto navigation gradient descent: runs, metrics and plot data"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run an optimizer from a JSON config");
  run->add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Trajectory output path (overrides the config)");

  std::vector<std::string> metric_inputs;
  std::string ref_front;
  std::vector<double> hv_ref{0.6, 0.6};
  bool pool = false;
  long from_iter = 0;
  auto* metrics = app.add_subcommand("metrics", "IGD+ and hypervolume of trajectory files");
  metrics->add_option("trajectories", metric_inputs, "Trajectory CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--ref-front", ref_front, "Reference front (trajectory or numeric CSV)")
      ->check(CLI::ExistingFile);
  metrics->add_flag("--pool", pool, "Use the non-dominated union of all inputs as reference");
  metrics->add_option("--hv-ref", hv_ref, "Hypervolume reference point a,b")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  metrics->add_option("--from-iter", from_iter,
                      "Ignore rows before this iteration (-1: last iteration only)")
      ->capture_default_str();

  std::string plot_input;
  std::string plot_out;
  int front_samples = 200;
  auto* plot = app.add_subcommand("export-plot", "Loss-space polylines and front overlay");
  plot->add_option("trajectory", plot_input, "Trajectory CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output path (default: standard output)");
  plot->add_option("--front-samples", front_samples, "Front overlay sample count")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return png::kExitConfigError;
  }

  if (run->parsed()) {
    std::optional<std::string> out;
    if (!run_out.empty()) out = run_out;
    return png::cmd_run(config_path, out, std::cout, std::cerr);
  }
  if (metrics->parsed()) {
    png::MetricsOptions opts;
    if (!ref_front.empty()) opts.ref_front_path = ref_front;
    opts.pool = pool;
    opts.hv_ref = Eigen::Map<const Eigen::VectorXd>(hv_ref.data(),
                                                    static_cast<Eigen::Index>(hv_ref.size()));
    opts.from_iter = from_iter;
    return png::cmd_metrics(metric_inputs, opts, std::cout, std::cerr);
  }
  return png::cmd_export_plot(plot_input, plot_out, front_samples, std::cout, std::cerr);
}
