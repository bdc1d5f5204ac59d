#include "png/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace png {
namespace {

void require_samples(int samples) {
  if (samples < 2) throw std::invalid_argument("front oracle needs at least 2 samples");
}

double grid(int k, int samples, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
}

}  // namespace

Vector toy_eta(Eigen::Index n) {
  if (n < 1) throw DimensionError("toy problem needs n >= 1");
  return Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

ObjectiveSet toy_problem(Eigen::Index n) {
  const Vector eta = toy_eta(n);
  auto make = [eta](double sign) {
    Objective o;
    o.value = [eta, sign](const ParameterVector& theta) {
      return 1.0 - std::exp(-(theta - sign * eta).squaredNorm());
    };
    o.gradient = [eta, sign](const ParameterVector& theta) -> Vector {
      const Vector d = theta - sign * eta;
      return 2.0 * std::exp(-d.squaredNorm()) * d;
    };
    return o;
  };
  return ObjectiveSet(n, {make(1.0), make(-1.0)}, "toy");
}

LossVector toy_front_point(double t) {
  LossVector out(2);
  out << 1.0 - std::exp(-(t - 1.0) * (t - 1.0)), 1.0 - std::exp(-(t + 1.0) * (t + 1.0));
  return out;
}

std::vector<LossVector> toy_front_oracle(int samples) {
  require_samples(samples);
  std::vector<LossVector> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) out.push_back(toy_front_point(grid(k, samples, -1.0, 1.0)));
  return out;
}

ObjectiveSet zdt2(Eigen::Index n) {
  if (n < 2) throw DimensionError("zdt2 needs n >= 2");
  const double tail_scale = 9.0 / static_cast<double>(n - 1);
  Objective f1;
  f1.value = [](const ParameterVector& x) { return x(0); };
  f1.gradient = [n](const ParameterVector&) -> Vector {
    Vector g = Vector::Zero(n);
    g(0) = 1.0;
    return g;
  };
  Objective f2;
  f2.value = [tail_scale, n](const ParameterVector& x) {
    const double h = 1.0 + tail_scale * x.tail(n - 1).sum();
    return h - x(0) * x(0) / h;
  };
  f2.gradient = [tail_scale, n](const ParameterVector& x) -> Vector {
    const double h = 1.0 + tail_scale * x.tail(n - 1).sum();
    const double ratio = x(0) / h;
    Vector g = Vector::Constant(n, (1.0 + ratio * ratio) * tail_scale);
    g(0) = -2.0 * ratio;
    return g;
  };
  return ObjectiveSet(n, {f1, f2}, "zdt2", Box{0.0, 1.0});
}

std::vector<LossVector> zdt2_front_oracle(int samples) {
  require_samples(samples);
  std::vector<LossVector> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double f1 = grid(k, samples, 0.0, 1.0);
    LossVector p(2);
    p << f1, 1.0 - f1 * f1;
    out.push_back(p);
  }
  return out;
}

bool is_known_problem(std::string_view name) { return name == "toy" || name == "zdt2"; }

ObjectiveSet make_problem(std::string_view name, Eigen::Index n) {
  if (name == "toy") return toy_problem(n);
  if (name == "zdt2") return zdt2(n);
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

Eigen::Index default_dimension(std::string_view name) {
  if (name == "zdt2") return 30;
  return 10;
}

double default_step_size(std::string_view name) {
  if (name == "zdt2") return 0.01;
  return 0.05;
}

std::optional<ParetoFrontOracle> front_oracle(std::string_view name) {
  if (name == "toy") return ParetoFrontOracle(toy_front_oracle);
  if (name == "zdt2") return ParetoFrontOracle(zdt2_front_oracle);
  return std::nullopt;
}

}  // namespace png
