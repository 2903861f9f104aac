#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hbvm/errors.hpp"
#include "hbvm/quadrature.hpp"

using namespace hbvm;

namespace {

// Classical Legendre P_k on [-1,1], recurrence kept local to the test.
double legendre_classical(int k, double x) {
  double prev = 1.0, cur = x;
  if (k == 0) return 1.0;
  for (int n = 1; n < k; ++n) {
    const double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

TEST_CASE("gauss_rule small cases") {
  const QuadratureRule one = gauss_rule(1);
  REQUIRE(one.size() == 1);
  CHECK(one.nodes[0] == 0.5);
  CHECK(one.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  const QuadratureRule two = gauss_rule(2);
  CHECK(two.nodes[0] == doctest::Approx(0.5 - std::sqrt(3.0) / 6.0).epsilon(1e-15));
  CHECK(two.nodes[1] == doctest::Approx(0.5 + std::sqrt(3.0) / 6.0).epsilon(1e-15));
  CHECK(two.nodes[0] == doctest::Approx(0.21132487).epsilon(1e-8));
  CHECK(two.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.integrate([](double t) { return t * t * t; }) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("gauss_rule rejects out-of-range sizes") {
  CHECK_THROWS_AS(gauss_rule(0), InvalidArgument);
  CHECK_THROWS_AS(gauss_rule(201), InvalidArgument);
}

TEST_CASE("gauss_rule invariants for k <= 200") {
  for (int k = 1; k <= 200; ++k) {
    CAPTURE(k);
    const QuadratureRule rule = gauss_rule(k);
    REQUIRE(rule.size() == std::size_t(k));
    double weight_sum = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto ui = std::size_t(i);
      const auto mirror = std::size_t(k - 1 - i);
      CHECK(rule.nodes[ui] > 0.0);
      CHECK(rule.nodes[ui] < 1.0);
      if (i > 0) CHECK(rule.nodes[ui] > rule.nodes[ui - 1]);
      CHECK(rule.weights[ui] > 0.0);
      CHECK(std::abs(rule.nodes[ui] + rule.nodes[mirror] - 1.0) <= 1e-14);
      CHECK(std::abs(rule.weights[ui] - rule.weights[mirror]) <= 1e-14);
      weight_sum += rule.weights[ui];
      // Distance to the true root, |P_k / P_k'| at the node in t units.
      const double x = 1.0 - 2.0 * rule.nodes[ui];
      const double deriv = k * (x * legendre_classical(k, x) - legendre_classical(k - 1, x)) / (x * x - 1.0);
      CHECK(std::abs(legendre_classical(k, x) / deriv) * 0.5 <= 1e-15);
    }
    CHECK(std::abs(weight_sum - 1.0) <= 1e-14);
  }
}

TEST_CASE("gauss_rule is exact through degree 2k-1") {
  for (int k : {1, 2, 3, 5, 8, 13, 20}) {
    const QuadratureRule rule = gauss_rule(k);
    for (int d = 0; d <= 2 * k - 1; ++d) {
      const double v = rule.integrate([d](double t) { return std::pow(t, d); });
      CHECK(std::abs(v - 1.0 / (d + 1.0)) <= 1e-13);
    }
  }
}

TEST_CASE("exactness_degree") {
  CHECK(exactness_degree(gauss_rule(1)) == 1);
  CHECK(exactness_degree(gauss_rule(2)) == 3);
  CHECK(exactness_degree(gauss_rule(5)) == 9);
  // Trapezoid-like two-point rule at the ends is exact through degree 1.
  CHECK(exactness_degree(QuadratureRule{{0.0, 1.0}, {0.5, 0.5}}) == 1);
  CHECK(exactness_degree(QuadratureRule{{0.5}, {0.9}}) == -1);
}

TEST_CASE("interpolatory_weights") {
  SUBCASE("single node") {
    const auto [beta, beta_hat] = interpolatory_weights({0.5}, {});
    REQUIRE(beta.size() == 1);
    CHECK(beta[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta_hat.empty());
  }
  SUBCASE("Gauss-2 nodes reproduce the Gauss weights") {
    const QuadratureRule g = gauss_rule(2);
    const auto [beta, beta_hat] = interpolatory_weights(g.nodes, {});
    CHECK(beta[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(beta[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("Gauss-3 middle node fundamental, outer nodes silent") {
    const QuadratureRule g = gauss_rule(3);
    const auto [beta, beta_hat] = interpolatory_weights({g.nodes[1]}, {g.nodes[0], g.nodes[2]});
    CHECK(beta[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    CHECK(beta_hat[0] == doctest::Approx(5.0 / 18.0).epsilon(1e-14));
    CHECK(beta_hat[1] == doctest::Approx(5.0 / 18.0).epsilon(1e-14));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(interpolatory_weights({0.2, 0.2}, {}), InvalidArgument);
    CHECK_THROWS_AS(interpolatory_weights({0.2}, {0.2}), InvalidArgument);
    CHECK_THROWS_AS(interpolatory_weights({0.0}, {}), InvalidArgument);
    CHECK_THROWS_AS(interpolatory_weights({}, {}), InvalidArgument);
  }
}

TEST_CASE("any fundamental/silent split of Gauss nodes returns the Gauss weights") {
  for (int k : {2, 4, 7, 10}) {
    const QuadratureRule g = gauss_rule(k);
    for (int mask = 1; mask < (1 << k); mask += 37) {
      std::vector<double> fund, silent, wf, ws;
      for (int i = 0; i < k; ++i) {
        if (mask & (1 << i)) {
          fund.push_back(g.nodes[std::size_t(i)]);
          wf.push_back(g.weights[std::size_t(i)]);
        } else {
          silent.push_back(g.nodes[std::size_t(i)]);
          ws.push_back(g.weights[std::size_t(i)]);
        }
      }
      const auto [beta, beta_hat] = interpolatory_weights(fund, silent);
      for (std::size_t i = 0; i < beta.size(); ++i) CHECK(std::abs(beta[i] - wf[i]) <= 1e-12);
      for (std::size_t i = 0; i < beta_hat.size(); ++i) CHECK(std::abs(beta_hat[i] - ws[i]) <= 1e-12);
    }
  }
}
