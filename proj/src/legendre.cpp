#include "hbvm/legendre.hpp"

#include <cmath>
#include <string>

#include "hbvm/errors.hpp"

namespace hbvm {

namespace {

void require_index(int j) {
  if (j < 1) throw InvalidIndex("Legendre basis index must be >= 1, got " + std::to_string(j));
}

// Antiderivative of P_j whose value at 0 is not necessarily zero.
double raw_antiderivative(int j, double c) {
  if (j == 1) return 0.5 * basis_eval(1, c) + xi(1) * basis_eval(2, c);
  return xi(j) * basis_eval(j + 1, c) - xi(j - 1) * basis_eval(j - 1, c);
}

}  // namespace

double xi(int j) {
  require_index(j);
  const double jj = j;
  return 1.0 / (2.0 * std::sqrt((2.0 * jj + 1.0) * (2.0 * jj - 1.0)));
}

double basis_eval(int j, double t) {
  require_index(j);
  const double x = 2.0 * t - 1.0;
  double prev = 1.0;
  if (j == 1) return prev;
  double cur = std::sqrt(3.0) * x;
  for (int n = 1; n + 1 < j; ++n) {
    // P_{n+2} from P_{n+1} and P_n.
    const double nn = n;
    const double next = x * ((2.0 * nn + 1.0) / (nn + 1.0)) * std::sqrt((2.0 * nn + 3.0) / (2.0 * nn + 1.0)) * cur -
                        (nn / (nn + 1.0)) * std::sqrt((2.0 * nn + 3.0) / (2.0 * nn - 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> basis_eval_all(int s, double t) {
  if (s < 1) throw InvalidIndex("basis size must be >= 1, got " + std::to_string(s));
  std::vector<double> p(static_cast<std::size_t>(s));
  const double x = 2.0 * t - 1.0;
  p[0] = 1.0;
  if (s > 1) p[1] = std::sqrt(3.0) * x;
  for (int n = 1; n + 1 < s; ++n) {
    const double nn = n;
    p[std::size_t(n + 1)] =
        x * ((2.0 * nn + 1.0) / (nn + 1.0)) * std::sqrt((2.0 * nn + 3.0) / (2.0 * nn + 1.0)) * p[std::size_t(n)] -
        (nn / (nn + 1.0)) * std::sqrt((2.0 * nn + 3.0) / (2.0 * nn - 1.0)) * p[std::size_t(n - 1)];
  }
  return p;
}

double basis_integral(int j, double c) {
  require_index(j);
  return raw_antiderivative(j, c) - raw_antiderivative(j, 0.0);
}

OrthonormalBasis::OrthonormalBasis(int max_degree) : max_degree_(max_degree) {
  require_index(max_degree);
  xi_.reserve(static_cast<std::size_t>(max_degree));
  for (int j = 1; j <= max_degree; ++j) xi_.push_back(hbvm::xi(j));
}

void OrthonormalBasis::check(int j) const {
  require_index(j);
  if (j > max_degree_)
    throw InvalidIndex("index " + std::to_string(j) + " exceeds basis size " + std::to_string(max_degree_));
}

double OrthonormalBasis::eval(int j, double t) const {
  check(j);
  return basis_eval(j, t);
}

double OrthonormalBasis::integral(int j, double c) const {
  check(j);
  return basis_integral(j, c);
}

}  // namespace hbvm
