#ifndef HBVM_LEGENDRE_HPP
#define HBVM_LEGENDRE_HPP

// Shifted Legendre polynomials on [0,1], normalized so that
//
//   int_0^1 P_i(t) P_j(t) dt = delta_ij,   deg P_j = j - 1,
//
// with P_1 = 1 and P_2(t) = sqrt(3) (2t - 1). Indices are 1-based throughout
// this module to match the usual numbering of the basis.

#include <vector>

namespace hbvm {

/// xi_j = 1 / (2 sqrt((2j+1)(2j-1))), the coefficient linking the integral of
/// P_j to its neighbours P_{j-1} and P_{j+1}.
double xi(int j);

/// P_j(t) by the three-term recurrence. Throws InvalidIndex when j < 1.
double basis_eval(int j, double t);

/// [P_1(t), ..., P_s(t)] from a single recurrence pass.
std::vector<double> basis_eval_all(int s, double t);

/// int_0^c P_j(x) dx, in closed form through the neighbouring polynomials.
double basis_integral(int j, double c);

/// The first `max_degree` basis functions with their xi coefficients cached.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(int max_degree);

  int max_degree() const noexcept { return max_degree_; }
  /// xi_1 .. xi_{max_degree}; element 0 holds xi_1.
  const std::vector<double>& xi() const noexcept { return xi_; }

  double eval(int j, double t) const;
  std::vector<double> eval_all(double t) const { return basis_eval_all(max_degree_, t); }
  double integral(int j, double c) const;

 private:
  void check(int j) const;

  int max_degree_;
  std::vector<double> xi_;
};

}  // namespace hbvm

#endif  // HBVM_LEGENDRE_HPP
