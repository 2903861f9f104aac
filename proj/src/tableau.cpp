#include "hbvm/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hbvm/errors.hpp"
#include "hbvm/legendre.hpp"

namespace hbvm {

Matrix basis_matrix(const std::vector<double>& nodes, int n) {
  Matrix p(nodes.size(), std::size_t(n));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto values = basis_eval_all(n, nodes[i]);
    for (int j = 0; j < n; ++j) p(i, std::size_t(j)) = values[std::size_t(j)];
  }
  return p;
}

HbvmTableau build_tableau(const QuadratureRule& rule, int s) {
  const int k = int(rule.size());
  if (s < 1 || s > k)
    throw InvalidArgument("build_tableau: need 1 <= s <= k, got k = " + std::to_string(k) + ", s = " + std::to_string(s));

  HbvmTableau tab;
  tab.k = k;
  tab.s = s;
  tab.rule = rule;
  tab.omega = rule.weights;
  tab.mat_P = basis_matrix(rule.nodes, s);
  tab.mat_I = Matrix(std::size_t(k), std::size_t(s));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < s; ++j) tab.mat_I(std::size_t(i), std::size_t(j)) = basis_integral(j + 1, rule.nodes[std::size_t(i)]);

  Matrix pt_omega = tab.mat_P.transposed();
  for (std::size_t j = 0; j < pt_omega.rows(); ++j)
    for (std::size_t l = 0; l < pt_omega.cols(); ++l) pt_omega(j, l) *= tab.omega[l];
  tab.A = tab.mat_I * pt_omega;
  return tab;
}

HbvmTableau build_gauss_tableau(int k, int s) { return build_tableau(gauss_rule(k), s); }

Matrix x_matrix(int s) {
  if (s < 1) throw InvalidArgument("x_matrix: s must be >= 1");
  Matrix x(static_cast<std::size_t>(s), static_cast<std::size_t>(s));
  x(0, 0) = 0.5;
  for (int j = 1; j < s; ++j) {
    x(std::size_t(j), std::size_t(j - 1)) = xi(j);
    x(std::size_t(j - 1), std::size_t(j)) = -xi(j);
  }
  return x;
}

Matrix xhat_matrix(int s) {
  const Matrix x = x_matrix(s);
  Matrix xhat(std::size_t(s + 1), std::size_t(s));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) xhat(i, j) = x(i, j);
  xhat(std::size_t(s), std::size_t(s - 1)) = xi(s);
  return xhat;
}

double pairing_error(const std::vector<Complex>& lhs, const std::vector<Complex>& rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(rhs.size(), false);
  double worst = 0.0;
  for (const Complex& a : lhs) {
    std::size_t best = rhs.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(a - rhs[j]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

SpectrumReport verify_isospectral(int k, int s, double tol) {
  if (s < 1 || k < s)
    throw InvalidArgument("verify_isospectral: need k >= s >= 1, got k = " + std::to_string(k) + ", s = " + std::to_string(s));
  const HbvmTableau tab = build_gauss_tableau(k, s);

  SpectrumReport report;
  report.eigenvalues = eigenvalues(tab.A);
  report.expected_zero_count = k - s;
  const double threshold = tol * norm2(tab.A);
  std::vector<Complex> nonzero;
  for (const Complex& lambda : report.eigenvalues) {
    if (std::abs(lambda) <= threshold)
      ++report.zero_count;
    else
      nonzero.push_back(lambda);
  }
  report.max_pairing_error = pairing_error(nonzero, eigenvalues(x_matrix(s)));
  report.passed = report.zero_count == report.expected_zero_count && report.max_pairing_error <= tol;
  return report;
}

}  // namespace hbvm
