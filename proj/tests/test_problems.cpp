#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "png/objectives.hpp"
#include "png/problems.hpp"

using namespace png;

TEST_SUITE("problems") {
  TEST_CASE("eta has unit norm") {
    for (Eigen::Index n : {1, 2, 10, 37}) CHECK(toy_eta(n).squaredNorm() == doctest::Approx(1.0));
  }

  TEST_CASE("toy losses far from both minima approach one") {
    const auto toy = toy_problem(10);
    const LossVector l = evaluate_losses(toy, Vector::Constant(10, 5.0));
    CHECK(l(0) > 1 - 1e-12);
    CHECK(l(1) > 1 - 1e-12);
  }

  TEST_CASE("the toy Pareto set is stationary") {
    const auto toy = toy_problem(10);
    const Vector eta = toy_eta(10);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> t(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      const Matrix jac = evaluate_jacobian(toy, t(rng) * eta);
      CHECK(oracle::grid_min_norm_2(jac).g <= 1e-10);
    }
  }

  TEST_CASE("toy front oracle") {
    CHECK((toy_front_point(0.0) - evaluate_losses(toy_problem(10), Vector::Zero(10))).norm() < 1e-15);
    CHECK(std::abs(toy_front_point(1.0)(0)) < 1e-15);
    CHECK(toy_front_point(1.0)(1) == doctest::Approx(1 - std::exp(-4.0)).epsilon(1e-14));

    const auto front = toy_front_oracle(200);
    REQUIRE(front.size() == 200);
    CHECK((front.front() - toy_front_point(-1.0)).norm() < 1e-15);
    CHECK((front.back() - toy_front_point(1.0)).norm() < 1e-15);
    for (std::size_t i = 0; i < front.size(); ++i) {
      for (std::size_t j = i + 1; j < front.size(); ++j) {
        CHECK(dominates(front[i], front[j]) == Dominance::kIncomparable);
      }
    }
    CHECK_THROWS(toy_front_oracle(1));
  }

  TEST_CASE("zdt2 formula examples") {
    const auto z = zdt2(30);
    Vector x = Vector::Zero(30);
    x(0) = 0.5;
    LossVector l = evaluate_losses(z, x);
    CHECK(l(0) == 0.5);
    CHECK(l(1) == doctest::Approx(0.75).epsilon(1e-15));

    for (double x1 : {0.0, 0.25, 0.9, 1.0}) {
      x.setZero();
      x(0) = x1;
      l = evaluate_losses(z, x);
      CHECK(l(1) == doctest::Approx(1 - x1 * x1).epsilon(1e-15));
    }

    x.setOnes();
    x(0) = 0.0;
    l = evaluate_losses(z, x);
    CHECK(l(0) == 0.0);
    CHECK(l(1) == doctest::Approx(10.0).epsilon(1e-15));
  }

  TEST_CASE("zdt2 carries the unit box") {
    const auto z = zdt2(4);
    REQUIRE(z.box().has_value());
    const Vector clipped = z.clip((Vector(4) << -0.5, 0.3, 1.7, 1.0).finished());
    CHECK(clipped == (Vector(4) << 0.0, 0.3, 1.0, 1.0).finished());
    CHECK_FALSE(toy_problem(3).box().has_value());
    CHECK_THROWS_AS(zdt2(1), DimensionError);
  }

  TEST_CASE("zdt2 gradients match finite differences at interior points") {
    const auto z = zdt2(30);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      Vector x(30);
      for (Eigen::Index j = 0; j < 30; ++j) x(j) = u(rng);
      const Matrix jac = evaluate_jacobian(z, x);
      for (Eigen::Index i = 0; i < 2; ++i) {
        const auto f = [&](const Vector& p) { return z.objective(i).value(p); };
        worst = std::max(worst, oracle::relative_error(jac.row(i).transpose(),
                                                       oracle::finite_difference(f, x)));
      }
    }
    CHECK(worst <= 1e-5);
  }

  TEST_CASE("zdt2 front oracle is the curve f2 = 1 - f1^2") {
    const auto front = zdt2_front_oracle(50);
    REQUIRE(front.size() == 50);
    for (const auto& p : front) CHECK(p(1) == doctest::Approx(1 - p(0) * p(0)).epsilon(1e-15));
    for (std::size_t i = 0; i + 1 < front.size(); ++i) {
      CHECK(dominates(front[i], front[i + 1]) == Dominance::kIncomparable);
    }
  }

  TEST_CASE("registry") {
    CHECK(is_known_problem("toy"));
    CHECK(is_known_problem("zdt2"));
    CHECK_FALSE(is_known_problem("zdt3"));
    CHECK(default_dimension("toy") == 10);
    CHECK(default_dimension("zdt2") == 30);
    CHECK(default_step_size("toy") == 0.05);
    CHECK(default_step_size("zdt2") == 0.01);
    CHECK(make_problem("toy", 4).dimension() == 4);
    CHECK(make_problem("zdt2", 5).name() == "zdt2");
    CHECK_THROWS_AS(make_problem("dtlz1", 3), std::invalid_argument);
    CHECK(front_oracle("toy").has_value());
    CHECK_FALSE(front_oracle("nope").has_value());
  }
}
