#ifndef HBVM_TABLEAU_HPP
#define HBVM_TABLEAU_HPP

#include <complex>
#include <vector>

#include "hbvm/linalg.hpp"
#include "hbvm/quadrature.hpp"

namespace hbvm {

/// Runge-Kutta form of HBVM(k,s) on the abscissae of `rule`.
///
///   mat_I(i,j) = int_0^{t_i} P_{j+1},  mat_P(i,j) = P_{j+1}(t_i),
///   A = mat_I * mat_P^T * diag(omega),
///
/// with 0-based i < k and j < s. A has rank s and its rows sum to the nodes.
struct HbvmTableau {
  int k = 0;
  int s = 0;
  QuadratureRule rule;
  Matrix mat_I;
  Matrix mat_P;
  Vector omega;
  Matrix A;

  const Vector& nodes() const noexcept { return rule.nodes; }
};

HbvmTableau build_tableau(const QuadratureRule& rule, int s);

/// build_tableau(gauss_rule(k), s).
HbvmTableau build_gauss_tableau(int k, int s);

/// The k x n matrix with entries P_{j+1}(t_i), for n basis functions.
Matrix basis_matrix(const std::vector<double>& nodes, int n);

/// s x s matrix whose eigenvalues are those of the s-stage Gauss-Legendre
/// Butcher matrix: (0,0) = 1/2, subdiagonal xi_j, superdiagonal -xi_j.
Matrix x_matrix(int s);

/// x_matrix(s) with one extra row carrying xi_s in the last column. Satisfies
/// mat_I = basis_matrix(nodes, s+1) * xhat_matrix(s).
Matrix xhat_matrix(int s);

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  int zero_count = 0;
  int expected_zero_count = 0;
  /// Largest distance between a nonzero eigenvalue of A and its greedy partner
  /// in eig(x_matrix(s)); +inf when the counts cannot be paired.
  double max_pairing_error = 0.0;
  bool passed = false;
};

/// Greedy nearest-neighbour matching of two eigenvalue multisets; returns the
/// largest matched distance, +inf when sizes differ.
double pairing_error(const std::vector<Complex>& lhs, const std::vector<Complex>& rhs);

/// Checks that A of HBVM(k,s) on Gauss nodes has k-s eigenvalues with
/// |lambda| <= tol * ||A||_2 and that the remaining s match eig(X_s) within
/// tol. A mismatch is reported through `passed`, never thrown.
SpectrumReport verify_isospectral(int k, int s, double tol = 1e-9);

}  // namespace hbvm

#endif  // HBVM_TABLEAU_HPP
