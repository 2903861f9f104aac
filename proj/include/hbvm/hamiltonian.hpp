#ifndef HBVM_HAMILTONIAN_HPP
#define HBVM_HAMILTONIAN_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "hbvm/linalg.hpp"

namespace hbvm {

/// Right-hand side y' = f(y) together with its Jacobian. The solver only
/// needs this view of a problem.
struct VectorField {
  std::size_t dim = 0;
  std::function<Vector(std::span<const double>)> f;
  std::function<Matrix(std::span<const double>)> jacobian;
};

/// Canonical Hamiltonian system y' = J grad H(y), y = (q, p) in R^{2m},
/// J = [[0, I_m], [-I_m, 0]].
class HamiltonianSystem {
 public:
  using ScalarFn = std::function<double(std::span<const double>)>;
  using GradientFn = std::function<Vector(std::span<const double>)>;
  using JacobianFn = std::function<Matrix(std::span<const double>)>;

  /// `jac_f` is the Jacobian of f = J grad H; without it, jacobian() falls
  /// back to central differences.
  HamiltonianSystem(std::string name, std::size_t dim, ScalarFn hamiltonian, GradientFn gradient,
                    std::optional<JacobianFn> jac_f = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t degrees_of_freedom() const noexcept { return dim_ / 2; }
  bool has_analytic_jacobian() const noexcept { return jac_f_.has_value(); }

  double hamiltonian(std::span<const double> y) const;
  Vector gradient(std::span<const double> y) const;
  Vector f(std::span<const double> y) const;
  Matrix jacobian(std::span<const double> y) const;

  /// Central differences of f with increment sqrt(eps) * (1 + |y_i|).
  Matrix finite_difference_jacobian(std::span<const double> y) const;

  VectorField vector_field() const;

  /// The canonical structure matrix for m degrees of freedom.
  static Matrix structure(std::size_t m);

 private:
  void check_state(std::span<const double> y) const;

  std::string name_;
  std::size_t dim_;
  ScalarFn hamiltonian_;
  GradientFn gradient_;
  std::optional<JacobianFn> jac_f_;
};

}  // namespace hbvm

#endif  // HBVM_HAMILTONIAN_HPP
