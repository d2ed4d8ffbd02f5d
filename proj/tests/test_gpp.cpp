// Generalized pendant-path representation: structure, initiation, expansion,
// and the sign recurrences used by the extremal analysis.

#include <catch2/catch_amalgamated.hpp>

#include <lapdist/gpp.hpp>
#include <lapdist/tree.hpp>

#include <algorithm>

using lapdist::Gpp;
using lapdist::GppTree;
using lapdist::Rational;
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

// spider: `legs` pendant paths of `len` vertices each hanging off vertex 0
Tree spider(int legs, int len) {
  std::vector<std::pair<int, int>> e;
  int next = 1;
  for (int l = 0; l < legs; ++l) {
    int prev = 0;
    for (int i = 0; i < len; ++i) {
      e.emplace_back(prev, next);
      prev = next++;
    }
  }
  return Tree(1 + legs * len, e);
}

GppTree single_anchor(std::vector<Gpp> gpps) {
  int total = 1;
  for (const Gpp& g : gpps) total += g.weight();
  return GppTree(Tree(1, {}), {std::move(gpps)}, total);
}

std::vector<Gpp> sorted_gpps(const std::vector<Gpp>& v) {
  std::vector<Gpp> out = v;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("gpp weight and validity", "[gpp]") {
  CHECK(Gpp{3, 2}.weight() == 7);
  CHECK(Gpp{0, 1}.weight() == 2);
  CHECK(Gpp{1, 0}.valid());
  CHECK(Gpp{0, 3}.valid());
  CHECK_FALSE(Gpp{0, 0}.valid());
  CHECK_FALSE(Gpp{-1, 2}.valid());
}

TEST_CASE("tree degree, weight, starlike predicate", "[gpp]") {
  const GppTree rep = single_anchor({{1, 0}, {0, 3}, {2, 1}});
  CHECK(rep.n_total == 1 + 1 + 6 + 4);
  // one edge per path-type gpp, r edges for the direct sun
  CHECK(rep.tree_degree(0) == 1 + 3 + 1);
  CHECK(rep.weight(0) == 11);
  CHECK(rep.is_starlike(0));
  CHECK_FALSE(single_anchor({{0, 5}}).is_starlike(0));

  const GppTree two(Tree(2, {{0, 1}}), {{{0, 1}}, {{1, 2}}}, 9);
  CHECK(two.tree_degree(0) == 1 + 1);
  CHECK_FALSE(two.is_starlike(0));  // two would need >= 2 gpps
}

TEST_CASE("structural check rejects broken representations", "[gpp]") {
  CHECK_NOTHROW(single_anchor({{1, 0}, {0, 2}}).check());
  // bare skeleton leaf
  CHECK_THROWS_AS(GppTree(Tree(2, {{0, 1}}), {{{0, 1}}, {}}, 4).check(),
                  std::logic_error);
  // miscounted total
  CHECK_THROWS_AS(GppTree(Tree(1, {}), {{{0, 2}}}, 6).check(),
                  std::logic_error);
  // invalid gpp
  CHECK_THROWS_AS(GppTree(Tree(1, {}), {{{0, 0}}}, 1).check(),
                  std::logic_error);
  // pendant table size mismatch
  CHECK_THROWS_AS(GppTree(Tree(2, {{0, 1}}), {{{0, 1}}}, 4).check(),
                  std::logic_error);
}

TEST_CASE("starlike listing sorts by weight then id", "[gpp]") {
  // chain of three anchors: weights 6, 2, 2
  const GppTree rep(Tree(3, {{0, 1}, {1, 2}}),
                    {{{0, 1}, {0, 2}}, {{1, 0}, {1, 0}}, {{1, 0}, {1, 0}}},
                    13);
  rep.check();
  const auto report = lapdist::starlike_vertices(rep);
  REQUIRE(report.vertices.size() == 3);
  CHECK(report.vertices[0].vertex == 1);
  CHECK(report.vertices[0].weight == 2);
  CHECK(report.vertices[1].vertex == 2);
  CHECK(report.vertices[2].vertex == 0);
  CHECK(report.vertices[2].weight == 6);
}

TEST_CASE("maximal pendant path conventions", "[gpp]") {
  CHECK(lapdist::pendant_path_gpp(1) == Gpp{1, 0});
  CHECK(lapdist::pendant_path_gpp(2) == Gpp{0, 1});
  CHECK(lapdist::pendant_path_gpp(3) == Gpp{1, 1});
  CHECK(lapdist::pendant_path_gpp(5) == Gpp{3, 1});
}

TEST_CASE("initiation strips pendant paths onto branching vertices", "[gpp]") {
  // 4-ray star: four single-vertex pendant paths at the center
  const GppTree s = lapdist::initiate_representation(star(5));
  REQUIRE(s.skeleton.n() == 1);
  CHECK(sorted_gpps(s.pendants[0]) ==
        std::vector<Gpp>{{1, 0}, {1, 0}, {1, 0}, {1, 0}});
  CHECK(s.n_total == 5);

  // three legs of two vertices each: all become suns
  const GppTree sp = lapdist::initiate_representation(spider(3, 2));
  REQUIRE(sp.skeleton.n() == 1);
  CHECK(sorted_gpps(sp.pendants[0]) == std::vector<Gpp>{{0, 1}, {0, 1}, {0, 1}});
}

TEST_CASE("expansion inverts initiation up to isomorphism", "[gpp]") {
  for (int n = 2; n <= 10; ++n) {
    const Tree p = path(n);
    const GppTree rep = lapdist::initiate_representation(p);
    rep.check();
    CHECK(lapdist::canonical_code(lapdist::expand(rep)) ==
          lapdist::canonical_code(p));
  }
  for (int i = 0; i < 40; ++i) {
    const Tree t = lapdist::random_tree(3 + i % 14, 900 + i);
    const GppTree rep = lapdist::initiate_representation(t);
    rep.check();
    CHECK(rep.n_total == t.n());
    CHECK(lapdist::canonical_code(lapdist::expand(rep)) ==
          lapdist::canonical_code(t));
  }
}

TEST_CASE("expansion labels skeleton first, then gpp vertices", "[gpp]") {
  const GppTree rep = single_anchor({{2, 1}});  // path 0-1-2, rays at 2
  const Tree t = lapdist::expand(rep);
  REQUIRE(t.n() == 5);
  CHECK(t.degree(0) == 1);
  CHECK(t.degree(2) == 2);  // path end carrying one ray
  CHECK(lapdist::sun_centers(rep) == std::vector<int>{2});

  // two direct suns on the same anchor share the center id
  const GppTree twin = single_anchor({{0, 2}, {0, 2}});
  CHECK(lapdist::sun_centers(twin) == std::vector<int>{0, 0});
  // path-type gpp with no rays has no center
  CHECK(lapdist::sun_centers(single_anchor({{3, 0}})).empty());
}

TEST_CASE("rendering", "[gpp]") {
  CHECK(lapdist::render(Gpp{1, 4}) == "P_1*S_4");
  CHECK(lapdist::render(single_anchor({{0, 1}, {1, 2}})) ==
        "u + P_0*S_1 \xE2\x8A\x95 P_1*S_2");
  const GppTree two(Tree(2, {{0, 1}}), {{{0, 1}}, {{1, 2}}}, 9);
  CHECK(lapdist::render(two) == "u0 + P_0*S_1 | u1 + P_1*S_2");
}

TEST_CASE("pendant sign recurrences at x = -d_n", "[gpp]") {
  // n = 8: x_1 = -3/4, x_2 = 19/12, b_1(0) = x_1, b_1(1) = -29/76 = x_3
  const auto [x1, b10] = lapdist::pendant_recurrence(8, 0, 1);
  CHECK(x1 == Rational(-3, 4));
  CHECK(b10 == Rational(-3, 4));
  const auto [x2, b21] = lapdist::pendant_recurrence(8, 1, 2);
  CHECK(x2 == Rational(19, 12));
  CHECK(b21 > Rational(0));
  const auto [x3, b11] = lapdist::pendant_recurrence(8, 1, 1);
  (void)x3;
  CHECK(b11 == Rational(-29, 76));
  CHECK(lapdist::pendant_recurrence(8, 1, 3).first == Rational(-29, 76));

  CHECK_THROWS_AS(lapdist::pendant_recurrence(2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(lapdist::pendant_recurrence(8, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(lapdist::pendant_recurrence(8, -1, 1), std::invalid_argument);
}

TEST_CASE("sign-flip threshold r0", "[gpp]") {
  CHECK(lapdist::r0(7) == Rational(295, 168));
  CHECK(lapdist::r0(8) == Rational(57, 28));
  CHECK_THROWS_AS(lapdist::r0(2), std::invalid_argument);
  // b_1 increases in r and flips sign exactly at r0: spot-check the flip
  for (int n : {8, 12, 53}) {
    const Rational r0n = lapdist::r0(n);
    for (int r = 0; r <= 2 * (n / 4); ++r) {
      const Rational b1 = lapdist::pendant_recurrence(n, r, 1).second;
      CHECK((b1 < Rational(0)) == (Rational(r) < r0n));
    }
  }
}
