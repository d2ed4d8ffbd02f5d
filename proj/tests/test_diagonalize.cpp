// Congruence diagonalization of L + xI on trees, interval counts, sigma.

#include <catch2/catch_amalgamated.hpp>

#include <lapdist/diagonalize.hpp>
#include <lapdist/tree.hpp>

#include <algorithm>

using lapdist::Rational;
using lapdist::RootedTree;
using lapdist::Tree;

namespace {

Tree path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Tree(n, e);
}

Tree star(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return Tree(n, e);
}

}  // namespace

TEST_CASE("diagonal values on the 4-ray star at x = -8/5", "[diagonalize]") {
  // leaves get 1 - 8/5 = -3/5; the center accumulates 12/5 + 4*(5/3) = 136/15
  const auto res = lapdist::diagonalize(RootedTree(star(5), 0), Rational(-8, 5));
  REQUIRE(res.values.size() == 5);
  CHECK(res.values[0] == Rational(136, 15));
  for (int v = 1; v < 5; ++v) CHECK(res.values[v] == Rational(-3, 5));
  CHECK(res.detached_edges.empty());

  // sign counts match the spectrum {0, 1, 1, 1, 5}: four below 8/5, one above
  const auto in = lapdist::inertia(star(5), Rational(8, 5));
  CHECK(in.negative == 4);
  CHECK(in.zero == 0);
  CHECK(in.positive == 1);
}

TEST_CASE("zero branch on an edge", "[diagonalize]") {
  // P_2 at x = -1: the leaf hits 0, so the pair is rewritten to {-1/2, 2};
  // the processed vertex is the root, hence nothing to detach
  const auto res = lapdist::diagonalize(RootedTree(path(2), 0), Rational(-1));
  std::vector<Rational> vals = res.values;
  std::sort(vals.begin(), vals.end());
  CHECK(vals == std::vector<Rational>{Rational(-1, 2), Rational(2)});
  CHECK(res.detached_edges.empty());
}

TEST_CASE("zero branch detaches an interior vertex", "[diagonalize]") {
  // P_4 rooted at 0, x = -1: vertex 3 hits 0, so vertex 2 takes -1/2, vertex 3
  // takes 2, and the edge (2,1) toward the root is cut
  const auto res = lapdist::diagonalize(RootedTree(path(4), 0), Rational(-1));
  REQUIRE(res.values.size() == 4);
  CHECK(res.values[0] == Rational(-1));
  CHECK(res.values[1] == Rational(1));
  CHECK(res.values[2] == Rational(-1, 2));
  CHECK(res.values[3] == Rational(2));
  CHECK(res.detached_edges ==
        std::vector<std::pair<int, int>>{{2, 1}});

  // spectrum of P_4 is {0, 2-sqrt(2), 2, 2+sqrt(2)}: two on each side of 1
  const auto in = lapdist::inertia(path(4), Rational(1));
  CHECK(in.negative == 2);
  CHECK(in.zero == 0);
  CHECK(in.positive == 2);
}

TEST_CASE("inertia counts eigenvalue multiplicity", "[diagonalize]") {
  // P_3 spectrum {0, 1, 3}
  const auto in = lapdist::inertia(path(3), Rational(1));
  CHECK(in.negative == 1);
  CHECK(in.zero == 1);
  CHECK(in.positive == 1);
  // lambda = 1 has multiplicity 3 on the 4-ray star
  CHECK(lapdist::inertia(star(5), Rational(1)).zero == 3);
  // kernel of every tree Laplacian is one-dimensional
  CHECK(lapdist::inertia(path(7), Rational(0)).zero == 1);
}

TEST_CASE("inertia does not depend on the processing root", "[diagonalize]") {
  const Tree t = lapdist::random_tree(24, 123);
  const auto ref = lapdist::inertia(t, Rational(7, 3), 0);
  for (int root = 1; root < t.n(); ++root) {
    const auto in = lapdist::inertia(t, Rational(7, 3), root);
    CHECK(in.negative == ref.negative);
    CHECK(in.zero == ref.zero);
    CHECK(in.positive == ref.positive);
  }
}

TEST_CASE("interval counts honor endpoint closedness", "[diagonalize]") {
  const Tree t = path(3);  // spectrum {0, 1, 3}
  auto count = [&](long lo_n, long lo_d, long hi_n, long hi_d, bool lc, bool hc) {
    return lapdist::count_interval(t, Rational(lo_n, lo_d), Rational(hi_n, hi_d),
                                   lc, hc);
  };
  CHECK(count(0, 1, 3, 1, true, true) == 3);    // [0, 3]
  CHECK(count(0, 1, 3, 1, false, false) == 1);  // (0, 3)
  CHECK(count(1, 1, 1, 1, true, true) == 1);    // [1, 1]
  CHECK(count(1, 1, 1, 1, false, true) == 0);   // (1, 1]
  CHECK(count(0, 1, 4, 3, true, false) == 2);   // [0, d_3)
  CHECK_THROWS_AS(count(2, 1, 1, 1, true, true), std::invalid_argument);
}

TEST_CASE("sigma splits the spectrum at the average degree", "[diagonalize]") {
  // P_5: d_5 = 8/5, three eigenvalues below, two above
  const auto s5 = lapdist::sigma(path(5));
  CHECK(s5.m_below == 3);
  CHECK(s5.sigma == 2);
  CHECK(s5.m_below + s5.sigma == 5);

  CHECK(lapdist::sigma(Tree(1, {})).sigma == 0);
  CHECK(lapdist::sigma(Tree(1, {})).m_below == 1);
  const auto s2 = lapdist::sigma(path(2));  // spectrum {0, 2}, d_2 = 1
  CHECK(s2.m_below == 1);
  CHECK(s2.sigma == 1);
}

TEST_CASE("float pass flags exact eigenvalue hits as ambiguous", "[diagonalize]") {
  // evaluating P_3 at its eigenvalue 1.0 leaves one diagonal entry at 0.0
  const auto fc = lapdist::float_counts(path(3), 1.0);
  CHECK(fc.ambiguous == 1);
  CHECK(fc.negative == 1);
  CHECK(fc.positive == 1);

  // away from the spectrum the float pass agrees with the exact one
  const Tree t = lapdist::random_tree(300, 5);
  const auto in = lapdist::inertia(t, Rational(7, 3));
  const auto f = lapdist::float_counts(t, 7.0 / 3.0);
  CHECK(in.zero == 0);  // rational tree eigenvalues are integers
  CHECK(f.ambiguous == 0);
  CHECK(f.negative == in.negative);
  CHECK(f.positive == in.positive);
}

TEST_CASE("sigma rejects an impossible zero at d_n", "[diagonalize]") {
  // d_n is irrational-free but never an eigenvalue for n >= 3, so the zero
  // count at d_n must be 0; the guard is a hard logic error, not a result
  for (int n : {3, 4, 5, 9, 16}) {
    const auto s = lapdist::sigma(lapdist::random_tree(n, 42));
    CHECK(s.sigma + s.m_below == n);
  }
}
