#include "png/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "png/problems.hpp"

namespace png {
namespace {

using nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (!known) throw ConfigError(join(path, it.key()), "unknown field");
  }
}

const json* find(const json& j, std::string_view key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, std::string_view key, const std::string& path) {
  const json* v = find(j, key);
  if (v == nullptr) throw ConfigError(join(path, key), "required field missing");
  return *v;
}

double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long>();
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected a non-negative integer");
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const long v = j.get<long>();
  if (v < 0) throw ConfigError(path, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& path, Eigen::Index expected = -1) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    throw ConfigError(path, "expected " + std::to_string(expected) + " entries, got " +
                                std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = as_real(j[i], index(path, i));
  }
  return v;
}

SimplexWeights as_weights(const json& j, const std::string& path, Eigen::Index m) {
  SimplexWeights w = as_vector(j, path, m);
  if ((w.array() < 0).any()) throw ConfigError(path, "weights must be nonnegative");
  if (std::abs(w.sum() - 1.0) > 1e-12) throw ConfigError(path, "weights must sum to 1");
  return w;
}

/// Either one weight vector or a list of them.
std::vector<SimplexWeights> as_weight_list(const json& j, const std::string& path,
                                           Eigen::Index m) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array");
  if (j.front().is_number()) return {as_weights(j, path, m)};
  std::vector<SimplexWeights> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_weights(j[i], index(path, i), m));
  return out;
}

void check_weight_count(const std::vector<SimplexWeights>& w, int ensemble_size,
                        const std::string& path) {
  if (w.size() != 1 && w.size() != static_cast<std::size_t>(ensemble_size)) {
    throw ConfigError(path, "need one weight vector or one per ensemble point (" +
                                std::to_string(ensemble_size) + ")");
  }
}

/// Evenly spread preference weights for two objectives; uniform otherwise.
std::vector<SimplexWeights> default_warmstart_weights(Eigen::Index m, int count) {
  std::vector<SimplexWeights> out;
  for (int k = 0; k < count; ++k) {
    SimplexWeights w = SimplexWeights::Constant(m, 1.0 / static_cast<double>(m));
    if (m == 2 && count > 1) {
      const double t = static_cast<double>(k) / static_cast<double>(count - 1);
      w << t, 1.0 - t;
    }
    out.push_back(w);
  }
  return out;
}

void parse_init(const json& j, RunConfig& cfg, Eigen::Index m) {
  const std::string path = "init";
  require_object(j, path);
  const std::string kind = as_string(require(j, "kind", path), join(path, "kind"));
  InitSpec& init = cfg.init;

  auto read_gaussian = [&] {
    if (const json* v = find(j, "scale")) {
      init.scale = as_real(*v, join(path, "scale"));
      if (!(init.scale >= 0)) throw ConfigError(join(path, "scale"), "must be >= 0");
    }
    if (const json* v = find(j, "seed")) init.seed = as_seed(*v, join(path, "seed"));
  };

  if (kind == "random-gaussian") {
    reject_unknown(j, path, {"kind", "scale", "seed"});
    init.kind = InitKind::kRandomGaussian;
    read_gaussian();
  } else if (kind == "explicit") {
    reject_unknown(j, path, {"kind", "points"});
    init.kind = InitKind::kExplicit;
    const std::string ppath = join(path, "points");
    const json& pts = require(j, "points", path);
    if (!pts.is_array()) throw ConfigError(ppath, "expected an array of points");
    if (pts.size() != static_cast<std::size_t>(cfg.ensemble_size)) {
      throw ConfigError(ppath, "expected ensemble_size = " + std::to_string(cfg.ensemble_size) +
                                   " points, got " + std::to_string(pts.size()));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      init.points.push_back(as_vector(pts[i], index(ppath, i), cfg.dimension));
    }
  } else if (kind == "linear-scalarization-warmstart") {
    reject_unknown(j, path, {"kind", "scale", "seed", "weights", "iters", "step_size"});
    init.kind = InitKind::kLinearScalarizationWarmstart;
    read_gaussian();
    init.iters = as_integer(require(j, "iters", path), join(path, "iters"));
    if (init.iters < 0) throw ConfigError(join(path, "iters"), "must be >= 0");
    if (const json* v = find(j, "weights")) {
      init.weights = as_weight_list(*v, join(path, "weights"), m);
      check_weight_count(init.weights, cfg.ensemble_size, join(path, "weights"));
    } else {
      if (m != 2) throw ConfigError(join(path, "weights"), "required for m != 2");
      init.weights = default_warmstart_weights(m, cfg.ensemble_size);
    }
    if (const json* v = find(j, "step_size")) {
      const double s = as_real(*v, join(path, "step_size"));
      if (!(s > 0)) throw ConfigError(join(path, "step_size"), "must be > 0");
      init.step_size = s;
    }
  } else {
    throw ConfigError(join(path, "kind"), "unknown init kind '" + kind + "'");
  }
}

void parse_control(const json& j, ControlSchedule& sched, bool& shared_floor) {
  const std::string path = "control";
  require_object(j, path);
  reject_unknown(j, path, {"alpha", "gamma", "beta", "alpha_decay_power", "shared_eps_floor"});
  if (const json* v = find(j, "alpha")) sched.alpha = as_real(*v, join(path, "alpha"));
  if (const json* v = find(j, "gamma")) sched.gamma = as_real(*v, join(path, "gamma"));
  if (const json* v = find(j, "beta")) sched.beta = as_real(*v, join(path, "beta"));
  if (const json* v = find(j, "alpha_decay_power")) {
    sched.alpha_decay_power = as_real(*v, join(path, "alpha_decay_power"));
  }
  if (const json* v = find(j, "shared_eps_floor")) {
    shared_floor = as_bool(*v, join(path, "shared_eps_floor"));
  }
  if (!(sched.alpha >= 0)) throw ConfigError(join(path, "alpha"), "must be >= 0");
  if (!(sched.gamma > 0)) throw ConfigError(join(path, "gamma"), "must be > 0");
  if (!(sched.beta > 0 && sched.beta < 1)) throw ConfigError(join(path, "beta"), "must lie in (0, 1)");
  if (!(sched.alpha_decay_power >= 0)) {
    throw ConfigError(join(path, "alpha_decay_power"), "must be >= 0");
  }
}

void parse_qp(const json& j, QpSolverConfig& qp) {
  const std::string path = "qp";
  require_object(j, path);
  reject_unknown(j, path, {"tol", "max_iters", "refine_active_set"});
  if (const json* v = find(j, "tol")) {
    qp.tol = as_real(*v, join(path, "tol"));
    if (!(qp.tol > 0)) throw ConfigError(join(path, "tol"), "must be > 0");
  }
  if (const json* v = find(j, "max_iters")) {
    const long it = as_integer(*v, join(path, "max_iters"));
    if (it < 1 || it > 1'000'000) throw ConfigError(join(path, "max_iters"), "must lie in [1, 1e6]");
    qp.max_iters = static_cast<int>(it);
  }
  if (const json* v = find(j, "refine_active_set")) {
    qp.refine_active_set = as_bool(*v, join(path, "refine_active_set"));
  }
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  require_object(doc, "");
  reject_unknown(doc, "", {"problem", "mode", "criterion", "ensemble_size", "init", "step_size",
                           "max_iters", "control", "qp", "scalarization_weights", "output"});

  RunConfig cfg;

  const json& problem = require(doc, "problem", "");
  require_object(problem, "problem");
  reject_unknown(problem, "problem", {"name", "n"});
  cfg.problem = as_string(require(problem, "name", "problem"), "problem.name");
  if (!is_known_problem(cfg.problem)) {
    throw ConfigError("problem.name", "unknown problem '" + cfg.problem + "'");
  }
  cfg.dimension = default_dimension(cfg.problem);
  if (const json* v = find(problem, "n")) {
    const long n = as_integer(*v, "problem.n");
    if (n < 1) throw ConfigError("problem.n", "must be >= 1");
    cfg.dimension = n;
  }
  Eigen::Index m = 0;
  try {
    m = make_problem(cfg.problem, cfg.dimension).num_objectives();
  } catch (const std::exception& e) {
    throw ConfigError("problem.n", e.what());
  }

  if (const json* v = find(doc, "mode")) {
    const std::string name = as_string(*v, "mode");
    const auto mode = parse_mode(name);
    if (!mode) throw ConfigError("mode", "unknown mode '" + name + "'");
    cfg.optimizer.mode = *mode;
  }

  if (const json* v = find(doc, "ensemble_size")) {
    const long n = as_integer(*v, "ensemble_size");
    if (n < 1 || n > 100'000) throw ConfigError("ensemble_size", "must lie in [1, 100000]");
    cfg.ensemble_size = static_cast<int>(n);
  }

  if (const json* v = find(doc, "criterion")) {
    require_object(*v, "criterion");
    reject_unknown(*v, "criterion", {"kind", "r"});
    const std::string kind = as_string(require(*v, "kind", "criterion"), "criterion.kind");
    const auto parsed = parse_criterion_kind(kind);
    if (!parsed) throw ConfigError("criterion.kind", "unknown criterion '" + kind + "'");
    CriterionSpec spec{*parsed, Vector()};
    if (const json* r = find(*v, "r")) {
      spec.reference = as_vector(*r, "criterion.r", m);
    } else if (*parsed != CriterionKind::kEnergyDistance) {
      throw ConfigError("criterion.r", "required field missing");
    }
    try {
      Criterion check(spec, m);
      if (check.is_ensemble() && cfg.ensemble_size < 2) {
        throw ConfigError("ensemble_size", "the energy distance needs at least two points");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("criterion", e.what());
    }
    cfg.criterion = std::move(spec);
  }
  const Mode mode = cfg.optimizer.mode;
  if ((mode == Mode::kPng || mode == Mode::kGradientDescentOnF) && !cfg.criterion) {
    throw ConfigError("criterion", std::string("required for mode '") +
                                       std::string(to_string(mode)) + "'");
  }

  if (const json* v = find(doc, "init")) {
    parse_init(*v, cfg, m);
  }

  cfg.optimizer.step_size = default_step_size(cfg.problem);
  if (const json* v = find(doc, "step_size")) {
    cfg.optimizer.step_size = as_real(*v, "step_size");
    if (!(cfg.optimizer.step_size > 0)) throw ConfigError("step_size", "must be > 0");
  }
  if (const json* v = find(doc, "max_iters")) {
    cfg.optimizer.max_iters = as_integer(*v, "max_iters");
    if (cfg.optimizer.max_iters < 0) throw ConfigError("max_iters", "must be >= 0");
  }
  cfg.optimizer.seed = cfg.init.seed;

  if (const json* v = find(doc, "control")) {
    parse_control(*v, cfg.schedule, cfg.optimizer.shared_eps_floor);
  }
  if (const json* v = find(doc, "qp")) parse_qp(*v, cfg.qp);

  if (const json* v = find(doc, "scalarization_weights")) {
    if (mode != Mode::kLinearScalarization) {
      throw ConfigError("scalarization_weights", "only valid in linear-scalarization mode");
    }
    cfg.optimizer.scalarization_weights = as_weight_list(*v, "scalarization_weights", m);
    check_weight_count(cfg.optimizer.scalarization_weights, cfg.ensemble_size,
                       "scalarization_weights");
  } else if (mode == Mode::kLinearScalarization) {
    throw ConfigError("scalarization_weights", "required for mode 'linear-scalarization'");
  }

  if (const json* v = find(doc, "output")) {
    cfg.output = as_string(*v, "output");
    if (cfg.output.empty()) throw ConfigError("output", "must not be empty");
  }

  json canonical = doc;
  canonical.erase("output");
  cfg.hash = fnv1a64_hex(canonical.dump());
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("", "cannot open config '" + path + "'");
  std::ostringstream text;
  text << is.rdbuf();
  return parse_run_config(text.str());
}

std::vector<ParameterVector> initial_points(const RunConfig& cfg, const ObjectiveSet& objs) {
  const InitSpec& init = cfg.init;
  std::vector<ParameterVector> points;
  if (init.kind == InitKind::kExplicit) {
    points = init.points;
  } else {
    points = random_gaussian_init(objs.dimension(), cfg.ensemble_size, init.scale, init.seed);
  }
  for (auto& p : points) p = objs.clip(p);
  if (init.kind == InitKind::kLinearScalarizationWarmstart) {
    points = linear_scalarization_warmstart(objs, points, init.weights, init.iters,
                                            init.step_size.value_or(cfg.optimizer.step_size));
  }
  return points;
}

}  // namespace png
