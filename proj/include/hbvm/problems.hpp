#ifndef HBVM_PROBLEMS_HPP
#define HBVM_PROBLEMS_HPP

// One-degree-of-freedom test problems H(q,p) = p^2/2 + V(q), state (q, p),
// each with analytic gradient and Jacobian.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hbvm/hamiltonian.hpp"

namespace hbvm::problems {

/// H = (p^2 + q^2) / 2, polynomial degree 2.
HamiltonianSystem harmonic_oscillator();

/// H = p^2/2 + q^4/4, polynomial degree 4.
HamiltonianSystem quartic_oscillator();

/// H = p^2/2 + q^6/6, polynomial degree 6.
HamiltonianSystem sextic_oscillator();

/// H = p^2/2 - cos q.
HamiltonianSystem pendulum();

/// Exact flow of the harmonic oscillator from y0 after time t.
Vector harmonic_exact(const Vector& y0, double t);

/// Looks up one of "harmonic", "quartic", "sextic", "pendulum".
/// Throws InvalidArgument for anything else.
HamiltonianSystem by_name(const std::string& name);

/// Degree of H as a polynomial, or nullopt for the pendulum.
std::optional<int> polynomial_degree(const std::string& name);

std::vector<std::string> names();

}  // namespace hbvm::problems

#endif  // HBVM_PROBLEMS_HPP
