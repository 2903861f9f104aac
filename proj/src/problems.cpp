#include "hbvm/problems.hpp"

#include <cmath>

#include "hbvm/errors.hpp"

namespace hbvm::problems {

namespace {

// H = p^2/2 + V(q) given V, V' and V''.
HamiltonianSystem separable(std::string name, std::function<double(double)> v, std::function<double(double)> dv,
                            std::function<double(double)> d2v) {
  auto hamiltonian = [v](std::span<const double> y) { return 0.5 * y[1] * y[1] + v(y[0]); };
  auto gradient = [dv](std::span<const double> y) { return Vector{dv(y[0]), y[1]}; };
  auto jac_f = [d2v](std::span<const double> y) { return Matrix{{0.0, 1.0}, {-d2v(y[0]), 0.0}}; };
  return HamiltonianSystem(std::move(name), 2, hamiltonian, gradient, HamiltonianSystem::JacobianFn(jac_f));
}

}  // namespace

HamiltonianSystem harmonic_oscillator() {
  return separable(
      "harmonic", [](double q) { return 0.5 * q * q; }, [](double q) { return q; }, [](double) { return 1.0; });
}

HamiltonianSystem quartic_oscillator() {
  return separable(
      "quartic", [](double q) { return 0.25 * q * q * q * q; }, [](double q) { return q * q * q; },
      [](double q) { return 3.0 * q * q; });
}

HamiltonianSystem sextic_oscillator() {
  return separable(
      "sextic", [](double q) { return std::pow(q, 6) / 6.0; }, [](double q) { return std::pow(q, 5); },
      [](double q) { return 5.0 * std::pow(q, 4); });
}

HamiltonianSystem pendulum() {
  return separable(
      "pendulum", [](double q) { return -std::cos(q); }, [](double q) { return std::sin(q); },
      [](double q) { return std::cos(q); });
}

Vector harmonic_exact(const Vector& y0, double t) {
  if (y0.size() != 2) throw InvalidArgument("harmonic_exact: state must have two components");
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {y0[0] * c + y0[1] * s, -y0[0] * s + y0[1] * c};
}

HamiltonianSystem by_name(const std::string& name) {
  if (name == "harmonic") return harmonic_oscillator();
  if (name == "quartic") return quartic_oscillator();
  if (name == "sextic") return sextic_oscillator();
  if (name == "pendulum") return pendulum();
  throw InvalidArgument("unknown problem '" + name + "'");
}

std::optional<int> polynomial_degree(const std::string& name) {
  if (name == "harmonic") return 2;
  if (name == "quartic") return 4;
  if (name == "sextic") return 6;
  if (name == "pendulum") return std::nullopt;
  throw InvalidArgument("unknown problem '" + name + "'");
}

std::vector<std::string> names() { return {"harmonic", "quartic", "sextic", "pendulum"}; }

}  // namespace hbvm::problems
