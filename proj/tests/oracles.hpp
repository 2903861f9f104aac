// Independent reference computations used only by the tests. Nothing here
// calls into the code path it is used to check.

#ifndef HBVM_TESTS_ORACLES_HPP
#define HBVM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "hbvm/hamiltonian.hpp"
#include "hbvm/linalg.hpp"
#include "hbvm/partition.hpp"

namespace oracle {

using hbvm::Complex;
using hbvm::Matrix;
using hbvm::Vector;

// Coefficients c_0..c_n of det(lambda I - M) = sum c_i lambda^i, by
// Faddeev-LeVerrier.
inline std::vector<double> characteristic_polynomial(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix mk = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix am = m * mk;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    c[n - k] = -trace / double(k);
    mk = am;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k];
  }
  return c;
}

// Roots of a monic polynomial by Durand-Kerner iteration.
inline std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs) {
  const std::size_t n = coeffs.size() - 1;
  auto eval = [&](Complex z) {
    Complex v = coeffs[n];
    for (std::size_t i = n; i-- > 0;) v = v * z + coeffs[i];
    return v;
  };
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(Complex(0.4, 0.9), double(i));
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      z[i] -= eval(z[i]) / denom;
    }
  }
  return z;
}

inline std::vector<Complex> eigenvalues_bruteforce(const Matrix& m) {
  return polynomial_roots(characteristic_polynomial(m));
}

// Polynomial with real coefficients, p[i] multiplies t^i.
using Poly = std::vector<double>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline double poly_integral(const Poly& p, double lo, double hi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    sum += p[i] * (std::pow(hi, double(i + 1)) - std::pow(lo, double(i + 1))) / double(i + 1);
  return sum;
}

inline Poly lagrange_cardinal(const std::vector<double>& nodes, std::size_t j) {
  Poly p{1.0};
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    if (m == j) continue;
    const double d = nodes[j] - nodes[m];
    p = poly_mul(p, Poly{-nodes[m] / d, 1.0 / d});
  }
  return p;
}

// Collocation Runge-Kutta matrix a_ij = int_0^{c_i} l_j, computed from the
// monomial coefficients of the cardinal polynomials.
inline Matrix collocation_matrix(const std::vector<double>& c) {
  Matrix a(c.size(), c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const Poly lj = lagrange_cardinal(c, j);
    for (std::size_t i = 0; i < c.size(); ++i) a(i, j) = poly_integral(lj, 0.0, c[i]);
  }
  return a;
}

inline Vector collocation_weights(const std::vector<double>& c) {
  Vector b(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) b[j] = poly_integral(lagrange_cardinal(c, j), 0.0, 1.0);
  return b;
}

// Closed-form Gauss-Legendre abscissae on [0,1] for s <= 3.
inline std::vector<double> gauss_nodes_closed_form(int s) {
  switch (s) {
    case 1:
      return {0.5};
    case 2:
      return {0.5 - std::sqrt(3.0) / 6.0, 0.5 + std::sqrt(3.0) / 6.0};
    case 3:
      return {0.5 - std::sqrt(15.0) / 10.0, 0.5, 0.5 + std::sqrt(15.0) / 10.0};
    default:
      return {};
  }
}

// Composite 3-point Gauss-Legendre rule (closed-form nodes) over n panels.
inline double composite_gauss3(const std::function<double(double)>& g, double lo, double hi, int n = 64) {
  const double offset = std::sqrt(0.6);
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mid = lo + (i + 0.5) * h;
    sum += (5.0 * g(mid - 0.5 * h * offset) + 8.0 * g(mid) + 5.0 * g(mid + 0.5 * h * offset)) / 18.0;
  }
  return sum * h;
}

inline Vector dense_solve(Matrix a, Vector b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t j = i + 1; j < n; ++j) sum -= a(i, j) * x[j];
    x[i] = sum / a(i, i);
  }
  return x;
}

// Full Newton (Jacobian re-evaluated at every stage, every iteration) on the
// reduced problem F(y1) = 0, assembled densely with the chain rule through
// the silent stages.
inline Matrix direct_newton_reduced(const hbvm::StagePartition& part, const hbvm::HamiltonianSystem& sys,
                                    const Vector& y0, double h) {
  const std::size_t s = part.s();
  const std::size_t r = part.silent_idx.size();
  const std::size_t d = y0.size();
  Matrix y1(s, d);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t c = 0; c < d; ++c) y1(i, c) = y0[c];

  for (int it = 0; it < 100; ++it) {
    Matrix y2(r, d);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t c = 0; c < d; ++c) {
        double v = part.u_hat[a] * y0[c];
        for (std::size_t j = 0; j < s; ++j) v += part.A1(a, j) * y1(j, c);
        y2(a, c) = v;
      }
    std::vector<Vector> f1(s), f2(r);
    std::vector<Matrix> j1(s), j2(r);
    for (std::size_t i = 0; i < s; ++i) {
      f1[i] = sys.f(y1.row(i));
      j1[i] = sys.jacobian(y1.row(i));
    }
    for (std::size_t a = 0; a < r; ++a) {
      f2[a] = sys.f(y2.row(a));
      j2[a] = sys.jacobian(y2.row(a));
    }
    Vector res(s * d);
    Matrix jac(s * d, s * d);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        double g = 0.0;
        for (std::size_t j = 0; j < s; ++j) g += part.B1(i, j) * f1[j][c];
        for (std::size_t a = 0; a < r; ++a) g += part.B2(i, a) * f2[a][c];
        res[i * d + c] = y1(i, c) - y0[c] - h * g;
      }
      for (std::size_t j = 0; j < s; ++j)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t e = 0; e < d; ++e) {
            double v = (i == j && c == e) ? 1.0 : 0.0;
            v -= h * part.B1(i, j) * j1[j](c, e);
            for (std::size_t a = 0; a < r; ++a) v -= h * part.B2(i, a) * j2[a](c, e) * part.A1(a, j);
            jac(i * d + c, j * d + e) = v;
          }
    }
    const Vector delta = dense_solve(jac, res);
    double step = 0.0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t c = 0; c < d; ++c) {
        y1(i, c) -= delta[i * d + c];
        step = std::max(step, std::abs(delta[i * d + c]));
      }
    if (step <= 1e-15 * (1.0 + hbvm::max_abs(y1))) break;
  }
  return y1;
}

// One step of the Runge-Kutta method (a, b) with the stage equations solved
// by full Newton.
inline Vector rk_step(const Matrix& a, const Vector& b, const hbvm::HamiltonianSystem& sys, const Vector& y0,
                      double h) {
  const std::size_t k = b.size();
  const std::size_t d = y0.size();
  Matrix y(k, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < d; ++c) y(i, c) = y0[c];
  for (int it = 0; it < 100; ++it) {
    std::vector<Vector> f(k);
    std::vector<Matrix> jf(k);
    for (std::size_t i = 0; i < k; ++i) {
      f[i] = sys.f(y.row(i));
      jf[i] = sys.jacobian(y.row(i));
    }
    Vector res(k * d);
    Matrix jac(k * d, k * d);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        double g = 0.0;
        for (std::size_t j = 0; j < k; ++j) g += a(i, j) * f[j][c];
        res[i * d + c] = y(i, c) - y0[c] - h * g;
      }
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t e = 0; e < d; ++e)
            jac(i * d + c, j * d + e) = ((i == j && c == e) ? 1.0 : 0.0) - h * a(i, j) * jf[j](c, e);
    }
    const Vector delta = dense_solve(jac, res);
    double step = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 0; c < d; ++c) {
        y(i, c) -= delta[i * d + c];
        step = std::max(step, std::abs(delta[i * d + c]));
      }
    if (step <= 1e-15 * (1.0 + hbvm::max_abs(y))) break;
  }
  Vector y1 = y0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vector fi = sys.f(y.row(i));
    for (std::size_t c = 0; c < d; ++c) y1[c] += h * b[i] * fi[c];
  }
  return y1;
}

// Random admissible fundamental index set: s distinct sorted indices in [0,k)
// whose integral block is not singular.
inline std::vector<std::size_t> random_indices(std::mt19937& rng, std::size_t k, std::size_t s) {
  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<std::size_t> pick(all.begin(), all.begin() + std::ptrdiff_t(s));
  std::sort(pick.begin(), pick.end());
  return pick;
}

}  // namespace oracle

#endif  // HBVM_TESTS_ORACLES_HPP
