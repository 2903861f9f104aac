#include "hbvm/hamiltonian.hpp"

#include <cmath>
#include <limits>

#include "hbvm/errors.hpp"

namespace hbvm {

HamiltonianSystem::HamiltonianSystem(std::string name, std::size_t dim, ScalarFn hamiltonian, GradientFn gradient,
                                     std::optional<JacobianFn> jac_f)
    : name_(std::move(name)),
      dim_(dim),
      hamiltonian_(std::move(hamiltonian)),
      gradient_(std::move(gradient)),
      jac_f_(std::move(jac_f)) {
  if (dim_ == 0 || dim_ % 2 != 0) throw InvalidArgument("HamiltonianSystem: dimension must be even and positive");
  if (!hamiltonian_ || !gradient_) throw InvalidArgument("HamiltonianSystem: H and grad H are required");
}

void HamiltonianSystem::check_state(std::span<const double> y) const {
  if (y.size() != dim_) throw InvalidArgument("HamiltonianSystem '" + name_ + "': state has wrong dimension");
}

double HamiltonianSystem::hamiltonian(std::span<const double> y) const {
  check_state(y);
  return hamiltonian_(y);
}

Vector HamiltonianSystem::gradient(std::span<const double> y) const {
  check_state(y);
  Vector g = gradient_(y);
  if (g.size() != dim_) throw InvalidArgument("HamiltonianSystem '" + name_ + "': gradient has wrong dimension");
  return g;
}

Vector HamiltonianSystem::f(std::span<const double> y) const {
  const Vector g = gradient(y);
  const std::size_t m = degrees_of_freedom();
  Vector out(dim_);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = g[m + i];
    out[m + i] = -g[i];
  }
  return out;
}

Matrix HamiltonianSystem::finite_difference_jacobian(std::span<const double> y) const {
  check_state(y);
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Matrix jac(dim_, dim_);
  Vector probe(y.begin(), y.end());
  for (std::size_t j = 0; j < dim_; ++j) {
    const double step = root_eps * (1.0 + std::abs(y[j]));
    probe[j] = y[j] + step;
    const Vector fp = f(probe);
    probe[j] = y[j] - step;
    const Vector fm = f(probe);
    probe[j] = y[j];
    for (std::size_t i = 0; i < dim_; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * step);
  }
  return jac;
}

Matrix HamiltonianSystem::jacobian(std::span<const double> y) const {
  if (!jac_f_) return finite_difference_jacobian(y);
  check_state(y);
  Matrix jac = (*jac_f_)(y);
  if (jac.rows() != dim_ || jac.cols() != dim_)
    throw InvalidArgument("HamiltonianSystem '" + name_ + "': Jacobian has wrong shape");
  return jac;
}

VectorField HamiltonianSystem::vector_field() const {
  VectorField field;
  field.dim = dim_;
  field.f = [this](std::span<const double> y) { return f(y); };
  field.jacobian = [this](std::span<const double> y) { return jacobian(y); };
  return field;
}

Matrix HamiltonianSystem::structure(std::size_t m) {
  Matrix j(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    j(i, m + i) = 1.0;
    j(m + i, i) = -1.0;
  }
  return j;
}

}  // namespace hbvm
