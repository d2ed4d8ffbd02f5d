// Independent eigenvalue-count oracles. None of these share a code path with
// the tree diagonalization: dense_inertia stresses symmetric pivoting,
// sturm_count stresses exact polynomial arithmetic, float_spectrum is a dense
// eigensolver, t1_spectrum is a closed form. A bug in the tree algorithm
// cannot hide behind a mistake shared with any of these.
#pragma once

#include "lapdist/diagonalize.hpp"
#include "lapdist/rational.hpp"
#include "lapdist/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace lapdist::oracle {

// Laplacian L = D - A as a dense integer matrix.
struct IntMatrix {
  int n = 0;
  std::vector<std::vector<long>> a;
};

inline IntMatrix laplacian(const Tree& t) {
  IntMatrix m;
  m.n = t.n();
  m.a.assign(m.n, std::vector<long>(m.n, 0));
  for (int v = 0; v < m.n; ++v) m.a[v][v] = t.degree(v);
  for (const auto& [u, v] : t.edges()) {
    m.a[u][v] = -1;
    m.a[v][u] = -1;
  }
  return m;
}

// Symmetric exact elimination on L - xI with 1x1 pivots and, when a diagonal
// pivot vanishes, a 2x2 pivot block [[0,a],[a,d]] (one negative + one positive
// eigenvalue). An all-zero active row contributes one zero. Sylvester's law
// makes the resulting sign counts the inertia of L - xI, i.e. eigenvalue
// counts below / at / above x.
inline Inertia dense_inertia(const Tree& t, const Rational& x) {
  const int n = t.n();
  IntMatrix lap = laplacian(t);
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i][j] = Rational(lap.a[i][j]) - (i == j ? x : Rational(0));

  Inertia in;
  int k = 0;
  while (k < n) {
    if (m[k][k] != Rational(0)) {
      const int s = m[k][k].sign();
      if (s < 0)
        ++in.negative;
      else
        ++in.positive;
      for (int i = k + 1; i < n; ++i) {
        if (m[i][k] == Rational(0)) continue;
        const Rational f = m[i][k] / m[k][k];
        for (int j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
      }
      ++k;
      continue;
    }
    int piv = -1;
    for (int j = k + 1; j < n; ++j) {
      if (m[k][j] != Rational(0)) {
        piv = j;
        break;
      }
    }
    if (piv == -1) {
      ++in.zero;
      ++k;
      continue;
    }
    if (piv != k + 1) {
      std::swap(m[piv], m[k + 1]);
      for (int i = 0; i < n; ++i) std::swap(m[i][piv], m[i][k + 1]);
    }
    // block B = [[0,a],[a,d]]: det = -a^2 < 0, so one of each sign
    const Rational a = m[k][k + 1];
    const Rational d = m[k + 1][k + 1];
    ++in.negative;
    ++in.positive;
    const Rational a2 = a * a;
    std::vector<Rational> u(n), v(n);
    for (int i = k + 2; i < n; ++i) {
      u[i] = m[i][k];
      v[i] = m[i][k + 1];
    }
    for (int i = k + 2; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        // Schur complement against B: M_ij - [u_i v_i] B^{-1} [u_j v_j]^T
        const Rational corr =
            (d * u[i] * u[j] - a * (u[i] * v[j] + v[i] * u[j])) / a2;
        m[i][j] += corr;
        if (j != i) m[j][i] = m[i][j];
      }
    }
    k += 2;
  }
  return in;
}

namespace detail {

// Polynomials as ascending coefficient vectors with no trailing zeros;
// an empty vector is the zero polynomial.
using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == Rational(0)) p.pop_back();
}

inline Rational eval(const Poly& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i)
    d.push_back(p[i] * Rational(static_cast<long>(i)));
  return d;
}

inline Poly remainder(Poly a, const Poly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

// quotient of an exact division (throws if a remainder survives)
inline Poly quotient(Poly a, const Poly& b) {
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  if (!a.empty()) throw std::logic_error("quotient: division not exact");
  return q;
}

// monic gcd(p, p') by Euclid; a constant result means p is square-free
inline Poly gcd_with_derivative(const Poly& p) {
  Poly a = p, b = derivative(p);
  trim(b);
  while (!b.empty()) {
    Poly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.size() >= 2) {
    const Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

// Determinant of an integer matrix by Bareiss fraction-free elimination.
inline mpz_class bareiss_det(std::vector<std::vector<mpz_class>> m) {
  const int n = static_cast<int>(m.size());
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (m[i][k] != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row == -1) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace detail

// Characteristic polynomial det(tI - L), monic of degree n, as ascending
// coefficients. Computed from n+1 integer determinants (Bareiss) interpolated
// through the nodes t = 0..n; coefficients come out integral.
inline std::vector<Rational> char_poly(const Tree& t) {
  const int n = t.n();
  IntMatrix lap = laplacian(t);
  std::vector<mpz_class> samples(n + 1);
  for (int s = 0; s <= n; ++s) {
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m[i][j] = (i == j ? s - lap.a[i][j] : -lap.a[i][j]);
    samples[s] = detail::bareiss_det(std::move(m));
  }
  // master polynomial N(x) = prod_{s=0..n} (x - s), integer coefficients
  std::vector<mpz_class> master(1, 1);
  for (int s = 0; s <= n; ++s) {
    master.insert(master.begin(), 0);
    for (std::size_t i = 0; i + 1 < master.size(); ++i)
      master[i] -= mpz_class(s) * master[i + 1];
  }
  std::vector<Rational> coeffs(n + 1, Rational(0));
  for (int s = 0; s <= n; ++s) {
    if (samples[s] == 0) continue;
    // basis_s = N(x)/(x - s) by synthetic division (exact)
    std::vector<mpz_class> basis(master.size() - 1);
    mpz_class carry = 0;
    for (int i = static_cast<int>(master.size()) - 2; i >= 0; --i) {
      carry = master[i + 1] + mpz_class(s) * carry;
      basis[i] = carry;
    }
    mpz_class w = 1;  // prod_{u != s} (s - u)
    for (int u = 0; u <= n; ++u)
      if (u != s) w *= mpz_class(s - u);
    const Rational scale = Rational(samples[s]) / Rational(w);
    for (int i = 0; i <= n; ++i) coeffs[i] += scale * Rational(basis[i]);
  }
  return coeffs;
}

// Number of eigenvalues in the half-open interval (lo, hi], counted with
// multiplicity. Each level counts the distinct roots of the square-free part
// p / gcd(p, p') by a Sturm chain — the chain must be built on the
// square-free part, because every element of a chain on p itself is
// divisible by gcd(p, p') and would vanish wholesale at a repeated root
// endpoint. Skipping zero evaluations in the sign-variation count then makes
// an endpoint evaluation behave as its right limit, which is exactly the
// (lo, hi] convention. Multiplicity is recovered by recursing on the gcd,
// which carries each root with multiplicity reduced by one.
inline int sturm_count(const Tree& t, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("sturm_count: requires lo < hi");
  detail::Poly p = char_poly(t);
  detail::trim(p);
  int total = 0;
  while (p.size() >= 2) {
    const detail::Poly g = detail::gcd_with_derivative(p);
    const detail::Poly sf = g.size() <= 1 ? p : detail::quotient(p, g);
    std::vector<detail::Poly> chain{sf, detail::derivative(sf)};
    detail::trim(chain.back());
    while (!chain.back().empty()) {
      detail::Poly r = detail::remainder(chain[chain.size() - 2], chain.back());
      for (auto& c : r) c = -c;
      chain.push_back(std::move(r));
    }
    chain.pop_back();  // drop the zero polynomial
    auto variations = [&chain](const Rational& x) {
      int var = 0, last = 0;
      for (const auto& q : chain) {
        const int s = detail::eval(q, x).sign();
        if (s == 0) continue;
        if (last != 0 && s != last) ++var;
        last = s;
      }
      return var;
    };
    total += variations(lo) - variations(hi);
    p = g;  // roots of multiplicity >= 2, one level down
  }
  return total;
}

// All n Laplacian eigenvalues by cyclic Jacobi, ascending. Dense; intended
// for cross-checks, not scale.
inline std::vector<double> float_spectrum(const Tree& t) {
  const int n = t.n();
  if (n > 2000) throw std::invalid_argument("float_spectrum: n > 2000");
  IntMatrix lap = laplacian(t);
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = static_cast<double>(lap.a[i][j]);

  const double tol = 1e-12;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (std::sqrt(off) < tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < tol / (n * n)) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double sgn = theta >= 0 ? 1.0 : -1.0;
        const double tt = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(tt * tt + 1);
        const double s = tt * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

// Closed-form spectrum of the balanced prototype on n = 4r+1 vertices:
// [0, theta^(2r-1), lambda_1, thetabar^(2r-1), lambda_2] with
// (theta, thetabar) = ((3 -+ sqrt 5)/2) and lambda_{1,2} the roots of
// x^2 - (2r+3)x + (4r+1). Ascending with multiplicities.
inline std::vector<double> t1_spectrum(int r) {
  if (r < 2) throw std::invalid_argument("t1_spectrum: requires r >= 2");
  const double s5 = std::sqrt(5.0);
  const double theta = (3 - s5) / 2;
  const double thetabar = (3 + s5) / 2;
  const double b = 2.0 * r + 3.0;
  const double disc = std::sqrt(b * b - 4 * (4.0 * r + 1.0));
  const double l1 = (b - disc) / 2;
  const double l2 = (b + disc) / 2;
  std::vector<double> eig;
  eig.reserve(4 * r + 1);
  eig.push_back(0.0);
  for (int i = 0; i < 2 * r - 1; ++i) eig.push_back(theta);
  eig.push_back(l1);
  for (int i = 0; i < 2 * r - 1; ++i) eig.push_back(thetabar);
  eig.push_back(l2);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace lapdist::oracle
