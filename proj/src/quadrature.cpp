#include "hbvm/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hbvm/errors.hpp"
#include "hbvm/legendre.hpp"

namespace hbvm {

namespace {

constexpr int kMaxGaussNodes = 200;
constexpr int kMaxNewtonIterations = 100;

// Classical Legendre P_k on [-1,1] and its derivative.
std::pair<double, double> legendre_with_derivative(int k, double x) {
  double prev = 1.0;
  double cur = x;
  for (int n = 1; n < k; ++n) {
    const double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  const double deriv = k * (x * cur - prev) / (x * x - 1.0);
  return {cur, deriv};
}

}  // namespace

QuadratureRule gauss_rule(int k) {
  if (k < 1 || k > kMaxGaussNodes)
    throw InvalidArgument("gauss_rule: k must lie in [1, 200], got " + std::to_string(k));

  QuadratureRule rule;
  rule.nodes.assign(std::size_t(k), 0.0);
  rule.weights.assign(std::size_t(k), 0.0);

  const int half = (k + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Root i of P_k counted from x = 1 downward, i.e. t ascending from 0.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    if (k % 2 == 1 && i == half - 1) {
      x = 0.0;
    } else {
      // Stop once the correction is at rounding level, then polish once.
      bool converged = false;
      for (int it = 0; it < kMaxNewtonIterations; ++it) {
        const auto [p, dp] = legendre_with_derivative(k, x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon()) {
          const auto [p1, dp1] = legendre_with_derivative(k, x);
          x -= p1 / dp1;
          converged = true;
          break;
        }
      }
      if (!converged) throw NumericError("gauss_rule: Newton iteration did not converge for k = " + std::to_string(k));
    }
    const double t = 0.5 * (1.0 - x);
    rule.nodes[std::size_t(i)] = t;
    rule.nodes[std::size_t(k - 1 - i)] = 1.0 - t;
  }
  if (k % 2 == 1) rule.nodes[std::size_t(half - 1)] = 0.5;

  for (int i = 0; i < half; ++i) {
    double sum = 0.0;
    for (double p : basis_eval_all(k, rule.nodes[std::size_t(i)])) sum += p * p;
    rule.weights[std::size_t(i)] = 1.0 / sum;
    rule.weights[std::size_t(k - 1 - i)] = 1.0 / sum;
  }
  return rule;
}

std::pair<std::vector<double>, std::vector<double>> interpolatory_weights(const std::vector<double>& fund,
                                                                          const std::vector<double>& silent) {
  std::vector<double> all = fund;
  all.insert(all.end(), silent.begin(), silent.end());
  const std::size_t n = all.size();
  if (n == 0) throw InvalidArgument("interpolatory_weights: no nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(all[i] > 0.0 && all[i] <= 1.0))
      throw InvalidArgument("interpolatory_weights: node " + std::to_string(all[i]) + " outside (0,1]");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(all[i] - all[j]) <= 1e-14)
        throw InvalidArgument("interpolatory_weights: duplicate node " + std::to_string(all[i]));
  }

  // The cardinal polynomials have degree n-1; m Gauss points integrate
  // degree 2m-1 exactly.
  const QuadratureRule oracle = gauss_rule(int(n / 2) + 1);
  std::vector<double> beta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    beta[i] = oracle.integrate([&](double t) {
      double prod = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) prod *= (t - all[j]) / (all[i] - all[j]);
      return prod;
    });
  }
  const auto split = beta.begin() + std::ptrdiff_t(fund.size());
  return {std::vector<double>(beta.begin(), split), std::vector<double>(split, beta.end())};
}

int exactness_degree(const QuadratureRule& rule) {
  const int max_degree = 2 * int(rule.size()) + 1;
  int degree = -1;
  for (int d = 0; d <= max_degree; ++d) {
    const double value = rule.integrate([d](double t) { return std::pow(t, d); });
    if (std::abs(value - 1.0 / (d + 1.0)) > 1e-11) break;
    degree = d;
  }
  return degree;
}

}  // namespace hbvm
