#include "png/commands.hpp"

#include <fstream>
#include <ostream>

#include "png/problems.hpp"

namespace png {
namespace {

std::string format_vector(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(v(i));
  }
  return out + "]";
}

void print_summary(const RunConfig& cfg, const TrajectoryFile& file, const std::string& path,
                   std::ostream& out) {
  out << "problem=" << cfg.problem << " n=" << cfg.dimension
      << " mode=" << to_string(cfg.optimizer.mode) << " points=" << cfg.ensemble_size
      << " max_iters=" << cfg.optimizer.max_iters << '\n';
  out << "config_hash=" << cfg.hash << '\n';
  out << "status=" << (file.header.complete ? "complete" : "partial") << '\n';
  if (file.records.empty()) {
    out << "no iterations recorded\n";
  } else {
    const long last = file.records.back().iter;
    out << "final iteration " << last << '\n';
    double F = file.records.back().F;
    for (const auto& r : file.records) {
      if (r.iter != last) continue;
      out << "  point " << r.point_id << ": losses=" << format_vector(r.losses)
          << " g=" << format_double(r.g)
          << " phi=" << (r.phi.is_off() ? std::string("off") : format_double(r.phi.value()))
          << '\n';
      F = r.F;
    }
    out << "  F=" << format_double(F) << '\n';
  }
  out << "wrote " << path << '\n';
}

/// Loss vectors of the rows selected by `from_iter`.
ApproximationSet checkpoint_set(const TrajectoryFile& file, long from_iter) {
  long first = from_iter;
  if (from_iter < 0 && !file.records.empty()) first = file.records.back().iter;
  ApproximationSet out;
  for (const auto& r : file.records) {
    if (r.iter >= first) out.push_back(r.losses);
  }
  return out;
}

}  // namespace

TrajectoryFile execute_run(const RunConfig& cfg) {
  TrajectoryFile file;
  auto& h = file.header;
  h.problem = cfg.problem;
  h.mode = std::string(to_string(cfg.optimizer.mode));
  h.config_hash = cfg.hash;

  const ObjectiveSet objs = make_problem(cfg.problem, cfg.dimension);
  h.dimension = objs.dimension();
  h.num_objectives = objs.num_objectives();

  std::optional<Criterion> criterion;
  if (cfg.criterion) criterion.emplace(*cfg.criterion, objs.num_objectives());

  std::vector<ParameterVector> thetas;
  try {
    thetas = initial_points(cfg, objs);
  } catch (const std::exception& e) {
    h.complete = false;
    h.failure = std::string("initialization: ") + e.what();
    return file;
  }

  RunResult result = run_ensemble(objs, criterion ? &*criterion : nullptr, thetas, cfg.optimizer,
                                  cfg.schedule, cfg.qp);
  h.complete = result.complete;
  h.failure = result.failure;
  file.records = std::move(result.records);
  return file;
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_override,
            std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const std::string path = out_override.value_or(cfg.output);
  if (path.empty()) {
    err << "config error: output: no output path (set \"output\" or pass --out)\n";
    return kExitConfigError;
  }

  TrajectoryFile file;
  try {
    file = execute_run(cfg);
    save_trajectory(path, file);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  print_summary(cfg, file, path, out);
  if (!file.header.complete) {
    err << "run stopped early: " << file.header.failure << '\n';
    return kExitRuntimeFailure;
  }
  return kExitOk;
}

int cmd_metrics(const std::vector<std::string>& trajectory_paths, const MetricsOptions& opts,
                std::ostream& out, std::ostream& err) {
  if (trajectory_paths.empty()) {
    err << "metrics: no trajectory files given\n";
    return kExitConfigError;
  }
  if (opts.ref_front_path && opts.pool) {
    err << "metrics: --ref-front and --pool are mutually exclusive\n";
    return kExitConfigError;
  }

  try {
    std::vector<TrajectoryFile> files;
    std::vector<ApproximationSet> sets;
    for (const auto& p : trajectory_paths) {
      files.push_back(load_trajectory(p));
      ApproximationSet raw = checkpoint_set(files.back(), opts.from_iter);
      if (raw.empty()) {
        err << p << ": no checkpoint rows selected; the approximation set is empty\n";
        return kExitRuntimeFailure;
      }
      sets.push_back(nondominated_filter(raw));
      if (sets.back().empty()) {
        err << p << ": approximation set is empty after dominance filtering\n";
        return kExitRuntimeFailure;
      }
    }
    const Eigen::Index m = sets.front().front().size();
    for (std::size_t k = 0; k < sets.size(); ++k) {
      if (sets[k].front().size() != m) {
        err << trajectory_paths[k] << ": " << sets[k].front().size()
            << " objectives, expected " << m << '\n';
        return kExitRuntimeFailure;
      }
    }

    ApproximationSet reference;
    std::string reference_name;
    if (opts.ref_front_path) {
      reference = load_loss_table(*opts.ref_front_path);
      reference_name = *opts.ref_front_path;
    } else if (opts.pool) {
      ApproximationSet all;
      for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
      reference = nondominated_filter(all);
      reference_name = "pooled";
    } else {
      const std::string& problem = files.front().header.problem;
      for (const auto& f : files) {
        if (f.header.problem != problem) {
          err << "metrics: inputs come from different problems; pass --ref-front or --pool\n";
          return kExitConfigError;
        }
      }
      const auto oracle = front_oracle(problem);
      if (!oracle) {
        err << "metrics: no front oracle for problem '" << problem
            << "'; pass --ref-front or --pool\n";
        return kExitConfigError;
      }
      reference = (*oracle)(opts.oracle_samples);
      reference_name = problem + " front (" + std::to_string(opts.oracle_samples) + " samples)";
    }
    if (reference.empty()) {
      err << "metrics: reference front is empty\n";
      return kExitRuntimeFailure;
    }
    if (reference.front().size() != m) {
      err << "metrics: reference front has " << reference.front().size()
          << " objectives, expected " << m << '\n';
      return kExitRuntimeFailure;
    }

    out << "reference=" << reference_name << " size=" << reference.size() << '\n';
    const bool hv_available = m == 2 && opts.hv_ref.size() == 2;
    if (!hv_available) err << "warning: hypervolume needs two objectives and a 2-D --hv-ref\n";
    for (std::size_t k = 0; k < sets.size(); ++k) {
      out << trajectory_paths[k] << ": points=" << sets[k].size()
          << " igd_plus=" << format_double(igd_plus(reference, sets[k])) << " hv=";
      if (hv_available) {
        out << format_double(hypervolume_2d(sets[k], opts.hv_ref));
      } else {
        out << "n/a";
      }
      out << '\n';
    }
  } catch (const std::exception& e) {
    err << "metrics failed: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  return kExitOk;
}

int cmd_export_plot(const std::string& trajectory_path, const std::string& out_path,
                    int front_samples, std::ostream& out, std::ostream& err) {
  if (front_samples < 2) {
    err << "export-plot: --front-samples must be >= 2\n";
    return kExitConfigError;
  }
  try {
    const TrajectoryFile file = load_trajectory(trajectory_path);
    const Eigen::Index m = file.header.num_objectives;

    std::ofstream fout;
    if (!out_path.empty()) {
      fout.open(out_path, std::ios::binary);
      if (!fout) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    }
    std::ostream& os = out_path.empty() ? out : fout;

    os << "# png-plot 1\n# problem=" << file.header.problem << '\n';
    os << "series,point_id,vertex";
    for (Eigen::Index i = 0; i < m; ++i) os << ",loss_" << i;
    os << '\n';

    long max_point = -1;
    for (const auto& r : file.records) max_point = std::max(max_point, r.point_id);
    for (long p = 0; p <= max_point; ++p) {
      long vertex = 0;
      for (const auto& r : file.records) {
        if (r.point_id != p) continue;
        os << "trajectory," << p << ',' << vertex++;
        for (Eigen::Index i = 0; i < m; ++i) os << ',' << format_double(r.losses(i));
        os << '\n';
      }
    }

    if (const auto oracle = front_oracle(file.header.problem)) {
      long vertex = 0;
      for (const auto& q : (*oracle)(front_samples)) {
        os << "front,," << vertex++;
        for (Eigen::Index i = 0; i < q.size(); ++i) os << ',' << format_double(q(i));
        os << '\n';
      }
    } else {
      err << "warning: no front oracle for problem '" << file.header.problem
          << "'; overlay omitted\n";
    }
    if (!os) throw std::runtime_error("write failed");
  } catch (const std::exception& e) {
    err << "export-plot failed: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  return kExitOk;
}

}  // namespace png
