#include "hbvm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace hbvm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double magnitude, double s) { return s >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

// Diagonal similarity by powers of two so that row and column norms are
// comparable; leaves eigenvalues unchanged and improves their accuracy.
void balance(Matrix& a) {
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  const std::size_t n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Gaussian elimination with pivoting down to upper Hessenberg form.
void to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double x = 0.0;
    std::size_t i = m;
    for (std::size_t j = m; j < n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        i = j;
      }
    }
    if (i != m) {
      for (std::size_t j = m - 1; j < n; ++j) std::swap(a(i, j), a(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(a(j, i), a(j, m));
    }
    if (x == 0.0) continue;
    for (i = m + 1; i < n; ++i) {
      double y = a(i, m - 1);
      if (y == 0.0) continue;
      y /= x;
      a(i, m - 1) = y;
      for (std::size_t j = m; j < n; ++j) a(i, j) -= y * a(m, j);
      for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, i);
    }
  }
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = 0.0;
}

// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
std::vector<Complex> hessenberg_qr(Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> w(a.rows());
  auto at = [&a](int i, int j) -> double& { return a(std::size_t(i), std::size_t(j)); };

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));

  int nn = n - 1;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) <= kEps * s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      x = at(nn, nn);
      if (l == nn) {
        w[std::size_t(nn--)] = x + t;
        continue;
      }
      y = at(nn - 1, nn - 1);
      double wprod = at(nn, nn - 1) * at(nn - 1, nn);
      if (l == nn - 1) {
        p = 0.5 * (y - x);
        q = p * p + wprod;
        z = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          z = p + sign_of(z, p);
          w[std::size_t(nn - 1)] = w[std::size_t(nn)] = x + z;
          if (z != 0.0) w[std::size_t(nn)] = x - wprod / z;
        } else {
          w[std::size_t(nn)] = Complex(x + p, -z);
          w[std::size_t(nn - 1)] = std::conj(w[std::size_t(nn)]);
        }
        nn -= 2;
        continue;
      }
      if (its == 30) throw NumericError("eigenvalues: QR iteration did not converge");
      if (its == 10 || its == 20) {
        // Exceptional shift.
        t += x;
        for (int i = 0; i <= nn; ++i) at(i, i) -= x;
        s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
        y = x = 0.75 * s;
        wprod = -0.4375 * s * s;
      }
      ++its;
      int m = nn - 2;
      for (; m >= l; --m) {
        z = at(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - wprod) / at(m + 1, m) + at(m, m + 1);
        q = at(m + 1, m + 1) - z - r - s;
        r = at(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
        if (u <= kEps * v) break;
      }
      for (int i = m; i < nn - 1; ++i) {
        at(i + 2, i) = 0.0;
        if (i != m) at(i + 2, i - 1) = 0.0;
      }
      for (int k = m; k < nn; ++k) {
        if (k != m) {
          p = at(k, k - 1);
          q = at(k + 1, k - 1);
          r = 0.0;
          if (k + 1 != nn) r = at(k + 2, k - 1);
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        s = sign_of(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) at(k, k - 1) = -at(k, k - 1);
        } else {
          at(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {
          p = at(k, j) + q * at(k + 1, j);
          if (k + 1 != nn) {
            p += r * at(k + 2, j);
            at(k + 2, j) -= p * z;
          }
          at(k + 1, j) -= p * y;
          at(k, j) -= p * x;
        }
        const int mmin = std::min(nn, k + 3);
        for (int i = l; i <= mmin; ++i) {
          p = x * at(i, k) + y * at(i, k + 1);
          if (k + 1 != nn) {
            p += z * at(i, k + 2);
            at(i, k + 2) -= p * r;
          }
          at(i, k + 1) -= p * q;
          at(i, k) -= p;
        }
      }
    } while (l + 1 < nn);
  }
  return w;
}

}  // namespace

std::vector<Complex> eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigenvalues of a non-square matrix");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j))) throw InvalidArgument("eigenvalues: matrix has non-finite entries");
  Matrix a = m;
  balance(a);
  to_hessenberg(a);
  return hessenberg_qr(a);
}

double spectral_radius(const Matrix& m) {
  double rho = 0.0;
  for (const Complex& lambda : eigenvalues(m)) rho = std::max(rho, std::abs(lambda));
  return rho;
}

Vector singular_values(const Matrix& m) {
  Matrix u = m.rows() >= m.cols() ? m : m.transposed();
  const std::size_t rows = u.rows();
  const std::size_t cols = u.cols();
  constexpr int max_sweeps = 100;
  bool rotated = true;
  for (int sweep = 0; sweep < max_sweeps && rotated; ++sweep) {
    rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = sign_of(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double up = u(i, p);
          const double uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    }
  }
  if (rotated) throw NumericError("singular_values: Jacobi sweeps did not converge");
  Vector sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) sum += u(i, j) * u(i, j);
    sigma[j] = std::sqrt(sum);
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double norm2(const Matrix& m) {
  if (m.empty()) return 0.0;
  return singular_values(m).front();
}

}  // namespace hbvm
