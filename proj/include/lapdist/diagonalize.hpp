// The core congruence diagonalization: one bottom-up pass produces a diagonal
// matrix congruent to L + xI. Sign counts then localize eigenvalues.
//
// Sign-count convention: callers think in eigenvalue space. inertia(T, x)
// internally runs the pass at argument -x, so `negative` counts eigenvalues
// below x, `zero` is the multiplicity of x, `positive` counts above.
#pragma once

#include "lapdist/rational.hpp"
#include "lapdist/tree.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lapdist {

enum class DiagMode { Exact, Float };

struct DiagResult {
  DiagMode mode = DiagMode::Exact;
  std::vector<Rational> values;          // exact mode
  std::vector<double> fvalues;           // float mode
  std::vector<std::pair<int, int>> detached_edges;  // removed by the zero branch
};

struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

// Float-mode classification buckets; ambiguous entries (|d| <= tau) mean the
// caller must re-run in exact mode — ambiguity never silently resolves.
struct FloatCounts {
  std::int64_t positive = 0;
  std::int64_t negative = 0;
  std::int64_t ambiguous = 0;
};

inline constexpr double kFloatAmbiguityTau = 1e-9;

namespace detail {

// Bottom-up elimination pass over a rooted tree, shared by both modes.
// Scalar is Rational or double; the zero branch tests exact equality with 0
// in both (float tolerance applies only to final classification).
template <typename Scalar>
void diagonalize_pass(const RootedTree& rt, const Scalar& x,
                      std::vector<Scalar>& d,
                      std::vector<std::pair<int, int>>* detached_out) {
  const Tree& t = *rt.base;
  const int n = t.n();
  d.resize(n);
  for (int v = 0; v < n; ++v) d[v] = Scalar(t.degree(v)) + x;

  // child contributions are accumulated into acc[parent]; zero children are
  // recorded so the parent can take the zero branch before dividing
  std::vector<Scalar> acc(n, Scalar(0));
  std::vector<int> zero_child(n, -1);
  std::vector<char> detached(n, 0);

  for (int vk : rt.order) {
    const int parent = rt.parent[vk];
    if (zero_child[vk] == -1) {
      d[vk] -= acc[vk];
    } else {
      // zero branch: d(v_k) := -1/2, d(v_j) := 2, remove edge to the parent
      const int vj = zero_child[vk];
      d[vk] = Scalar(-1) / Scalar(2);
      d[vj] = Scalar(2);
      if (parent >= 0) {
        detached[vk] = 1;
        if (detached_out) detached_out->emplace_back(vk, parent);
      }
    }
    if (parent >= 0 && !detached[vk]) {
      if (d[vk] == Scalar(0)) {
        if (zero_child[parent] == -1 || vk < zero_child[parent]) {
          // lowest-index tie-break among zero children
          zero_child[parent] = vk;
        }
      } else {
        acc[parent] += Scalar(1) / d[vk];
      }
    }
  }
}

}  // namespace detail

// Exact diagonalization of L + xI on the given rooted view.
inline DiagResult diagonalize(const RootedTree& rt, const Rational& x) {
  DiagResult res;
  res.mode = DiagMode::Exact;
  detail::diagonalize_pass<Rational>(rt, x, res.values, &res.detached_edges);
  return res;
}

// Float fast path (benchmark-only; see FloatCounts).
inline DiagResult diagonalize_float(const RootedTree& rt, double x) {
  DiagResult res;
  res.mode = DiagMode::Float;
  detail::diagonalize_pass<double>(rt, x, res.fvalues, &res.detached_edges);
  return res;
}

// Eigenvalue counts relative to x: negative = #{lambda < x}, zero = mult(x),
// positive = #{lambda > x}. Inertia is root-independent; `root` only selects
// the processing order.
inline Inertia inertia(const Tree& t, const Rational& x, int root = 0) {
  RootedTree rt(t, root);
  DiagResult res = diagonalize(rt, -x);
  Inertia in;
  for (const auto& v : res.values) {
    const int s = v.sign();
    if (s < 0)
      ++in.negative;
    else if (s > 0)
      ++in.positive;
    else
      ++in.zero;
  }
  return in;
}

inline FloatCounts float_counts(const Tree& t, double x, int root = 0) {
  RootedTree rt(t, root);
  DiagResult res = diagonalize_float(rt, -x);
  FloatCounts fc;
  for (double v : res.fvalues) {
    if (std::abs(v) <= kFloatAmbiguityTau)
      ++fc.ambiguous;
    else if (v < 0)
      ++fc.negative;
    else
      ++fc.positive;
  }
  return fc;
}

// m_T(I) for an arbitrary interval, from two inertia calls.
inline int count_interval(const Tree& t, const Rational& lo, const Rational& hi,
                          bool lo_closed, bool hi_closed, int root = 0) {
  if (lo > hi) throw std::invalid_argument("count_interval: inverted interval");
  Inertia at_hi = inertia(t, hi, root);
  Inertia at_lo = inertia(t, lo, root);
  int count = at_hi.negative + (hi_closed ? at_hi.zero : 0);
  count -= at_lo.negative + (lo_closed ? 0 : at_lo.zero);
  return count;
}

struct SigmaResult {
  int sigma = 0;    // eigenvalues above d_n
  int m_below = 0;  // eigenvalues in [0, d_n)
};

// sigma(T) = m_T(d_n, n]. For n >= 3, d_n is never an eigenvalue (rational
// Laplacian eigenvalues of graphs are integers), so sigma + m_below = n; this
// is asserted, and a violation is a hard error.
inline SigmaResult sigma(const Tree& t, int root = 0) {
  const int n = t.n();
  if (n == 1) return {0, 1};
  Inertia in = inertia(t, average_degree(n), root);
  if (n >= 3 && in.zero != 0)
    throw std::logic_error("sigma: d_n appeared as an eigenvalue");
  return {in.positive, in.negative};
}

}  // namespace lapdist
