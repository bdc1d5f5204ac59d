#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "png/simplex_qp.hpp"

using namespace png;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> rs) {
  Matrix out(static_cast<Eigen::Index>(rs.size()), static_cast<Eigen::Index>(rs.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rs) out.row(i++) = vec(r).transpose();
  return out;
}

}  // namespace

TEST_SUITE("simplex-qp") {
  TEST_CASE("project_simplex examples") {
    CHECK((project_simplex(vec({0.5, 0.5})) - vec({0.5, 0.5})).norm() < 1e-15);
    CHECK((project_simplex(vec({2, 0})) - vec({1, 0})).norm() < 1e-15);
    CHECK((project_simplex(vec({0.2, 0.1, 0.1})) - vec({0.4, 0.3, 0.3})).cwiseAbs().maxCoeff() <
          1e-15);
  }

  TEST_CASE("project_simplex rejects empty and non-finite input") {
    CHECK_THROWS_AS(project_simplex(Vector()), DimensionError);
    CHECK_THROWS_AS(project_simplex(vec({1, NAN})), DomainError);
  }

  TEST_CASE("project_simplex matches the sort-based projection on 1000 inputs") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_real_distribution<double> spread(0.01, 10.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Vector x = oracle::gaussian_vector(rng, size(rng), spread(rng));
      const Vector p = project_simplex(x);
      CHECK((p.array() >= 0).all());
      CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
      worst = std::max(worst, (p - oracle::sort_projection(x)).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("min_norm_weights examples") {
    auto r = min_norm_weights(rows({{1, 0}, {0, 1}}));
    CHECK((r.weights - vec({0.5, 0.5})).norm() < 1e-12);
    CHECK(r.g == doctest::Approx(0.5).epsilon(1e-12));

    const Vector v = vec({0.3, -1.2, 2.0});
    Matrix opposite(2, 3);
    opposite << v.transpose(), -v.transpose();
    r = min_norm_weights(opposite);
    CHECK((r.weights - vec({0.5, 0.5})).norm() < 1e-12);
    CHECK(r.g <= 1e-20);

    r = min_norm_weights(Matrix(v.transpose()));
    CHECK(r.weights.size() == 1);
    CHECK(r.weights(0) == 1.0);
    CHECK(r.g == doctest::Approx(v.squaredNorm()).epsilon(1e-14));
  }

  TEST_CASE("min_norm_weights agrees with the grid oracle") {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
      const Eigen::Index m = 2 + trial % 2;
      const Matrix jac = oracle::gaussian_matrix(rng, m, 2 + trial % 5);
      const auto res = min_norm_weights(jac);
      CHECK((res.weights.array() >= 0).all());
      CHECK(std::abs(res.weights.sum() - 1.0) <= 1e-12);
      const double ref = m == 2 ? oracle::grid_min_norm_2(jac).g : oracle::grid_min_norm_3(jac).g;
      worst = std::max(worst, std::abs(res.g - ref));
      // Never worse than the oracle beyond roundoff.
      CHECK(res.g <= ref + 1e-12);
    }
    CHECK(worst <= 1e-6);
  }

  TEST_CASE("png_dual_solve examples") {
    auto d = png_dual_solve(rows({{0, 1}}), vec({1, 0}), 0.5);
    CHECK(d.lambda(0) == doctest::Approx(0.5).epsilon(1e-12));
    const auto dir = assemble_direction(rows({{0, 1}}), vec({1, 0}), d.lambda);
    CHECK((dir.v - vec({1, 0.5})).norm() < 1e-12);

    d = png_dual_solve(rows({{1, 0}, {0, 1}}), vec({0, 0}), 1.0);
    CHECK((d.lambda - vec({1, 1})).norm() < 1e-12);

    // grad F already satisfies every constraint.
    d = png_dual_solve(rows({{1, 0}, {0, 1}}), vec({2, 3}), 1.0);
    CHECK(d.lambda.isZero(0.0));
  }

  TEST_CASE("png_dual_solve reports infeasible directions") {
    // A zero gradient can never reach a positive descent rate.
    CHECK_THROWS_AS(png_dual_solve(rows({{0, 0}, {1, 0}}), vec({1, 1}), 0.1), InfeasibleDirection);
    // Opposite gradients: 0 lies in their convex hull.
    CHECK_THROWS_AS(png_dual_solve(rows({{1, 2}, {-1, -2}}), vec({0, 1}), 0.1),
                    InfeasibleDirection);
    CHECK_THROWS_AS(png_dual_solve(rows({{1, 0}}), vec({1, 0}), INFINITY), DomainError);
    // A non-positive phi stays feasible even then.
    CHECK_NOTHROW(png_dual_solve(rows({{1, 2}, {-1, -2}}), vec({0, 1}), 0.0));
  }

  TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(png_dual_solve(rows({{1, 0}}), vec({1, 0, 0}), 0.1), DimensionError);
    CHECK_THROWS_AS(assemble_direction(rows({{1, 0}}), vec({1, 0}), vec({1, 1})), DimensionError);
    CHECK_THROWS_AS(min_norm_weights(Matrix(0, 3)), DimensionError);
  }

  TEST_CASE("assemble_direction with zero multipliers returns grad F") {
    const Vector gradF = vec({0.1, -0.4, 2});
    const auto dir = assemble_direction(rows({{1, 0, 0}, {0, 1, 1}}), gradF, Vector::Zero(2));
    CHECK(dir.v == gradF);
    CHECK(dir.weighted_loss_part.isZero(0.0));
  }

  TEST_CASE("assemble_direction with min-norm weights and zero grad F is the MGD direction") {
    const Matrix jac = rows({{1, 0}, {0, 1}});
    const auto w = min_norm_weights(jac).weights;
    const auto dir = assemble_direction(jac, Vector::Zero(2), w);
    CHECK((dir.v - vec({0.5, 0.5})).norm() < 1e-12);
  }

  TEST_CASE("dual matches the brute-force primal, with feasibility and slackness") {
    std::mt19937_64 rng(3);
    double worst = 0.0, worst_feas = 0.0, worst_slack = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
      const Eigen::Index m = 1 + trial % 3;
      const Eigen::Index n = 2 + (trial / 3) % 9;
      const auto inst = oracle::random_feasible_instance(rng, m, n);
      const auto d = png_dual_solve(inst.jac, inst.gradF, inst.phi);
      CHECK((d.lambda.array() >= 0).all());
      const Vector v = assemble_direction(inst.jac, inst.gradF, d.lambda).v;
      const Vector slack = (inst.jac * v).array() - inst.phi;
      worst = std::max(worst, (v - inst.primal).cwiseAbs().maxCoeff());
      worst_feas = std::max(worst_feas, -slack.minCoeff());
      worst_slack = std::max(worst_slack, d.lambda.cwiseProduct(slack).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-5);
    CHECK(worst_feas <= 1e-6);
    CHECK(worst_slack <= 1e-6);
  }

  TEST_CASE("kernels are usable in long double") {
    Eigen::Matrix<long double, 2, 2> jac;
    jac << 1, 0, 0, 1;
    const auto res = min_norm_weights(jac);
    CHECK(static_cast<double>(res.g) == doctest::Approx(0.5));
    Eigen::Matrix<long double, 2, 1> gradF(0, 0);
    const auto d = png_dual_solve(jac, gradF, 1.0L);
    CHECK(static_cast<double>(d.lambda(0)) == doctest::Approx(1.0));
  }
}
