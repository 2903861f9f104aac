#ifndef HBVM_QUADRATURE_HPP
#define HBVM_QUADRATURE_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace hbvm {

/// Quadrature on [0,1]: sum_i weights[i] * g(nodes[i]) ~ int_0^1 g.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <typename F>
  double integrate(F&& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * g(nodes[i]);
    return sum;
  }
};

/// k-point Gauss-Legendre rule shifted to [0,1], 1 <= k <= 200.
///
/// Nodes are the roots of the degree-k Legendre polynomial found by Newton
/// iteration from Chebyshev-angle guesses; the lower half is computed and the
/// upper half mirrored, so t_i + t_{k+1-i} = 1 holds exactly. Weights come
/// from the Christoffel function of the orthonormal shifted basis,
/// w_i = 1 / sum_{j=1}^{k} P_j(t_i)^2.
QuadratureRule gauss_rule(int k);

/// Interpolatory weights of the rule built on fund ∪ silent:
/// beta_i = int_0^1 prod_{j != i} (t - c_j) / (c_i - c_j) dt, where c runs
/// over the fundamental nodes followed by the silent ones. Returns the weights
/// for the fundamental nodes and for the silent nodes, in input order.
std::pair<std::vector<double>, std::vector<double>> interpolatory_weights(const std::vector<double>& fund,
                                                                          const std::vector<double>& silent);

/// Largest d <= 2k+1 such that every monomial t^0..t^d integrates to within
/// 1e-11; -1 if even constants fail.
int exactness_degree(const QuadratureRule& rule);

}  // namespace hbvm

#endif  // HBVM_QUADRATURE_HPP
