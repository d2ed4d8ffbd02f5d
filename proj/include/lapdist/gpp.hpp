// The (P_q * S_r) representation: a tree is stored as a retained skeleton
// plus, at some skeleton vertices, generalized pendant paths — a path of q
// edges ending in a sun with r rays (a ray is a pendant P_2). All structural
// rewrites operate on these (q, r) pairs; expand() is the bridge back to
// concrete trees.
#pragma once

#include "lapdist/rational.hpp"
#include "lapdist/tree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lapdist {

struct Gpp {
  int q = 0;  // path length (edges from the anchor to the sun center)
  int r = 0;  // ray count of the sun
  int weight() const { return q + 2 * r; }
  bool valid() const { return q >= 0 && r >= 0 && (q > 0 || r > 0); }
  friend bool operator==(const Gpp& a, const Gpp& b) {
    return a.q == b.q && a.r == b.r;
  }
  friend bool operator<(const Gpp& a, const Gpp& b) {
    return a.q != b.q ? a.q < b.q : a.r < b.r;
  }
};

// Skeleton tree (dense vertex ids) with pendant gpp lists per vertex.
// n_total is the vertex count of the represented (expanded) tree and is
// conserved by every rewrite.
struct GppTree {
  Tree skeleton;
  std::vector<std::vector<Gpp>> pendants;  // indexed by skeleton vertex id
  int n_total = 0;

  GppTree() : skeleton(1, {}), pendants(1), n_total(1) {}
  GppTree(Tree skel, std::vector<std::vector<Gpp>> pend, int total)
      : skeleton(std::move(skel)), pendants(std::move(pend)), n_total(total) {}

  // degree of v in the represented tree: skeleton edges, plus one edge per
  // path-type gpp (q >= 1), plus r edges for a sun sitting directly on v
  int tree_degree(int v) const {
    int d = skeleton.degree(v);
    for (const Gpp& g : pendants[v]) d += g.q >= 1 ? 1 : g.r;
    return d;
  }

  int weight(int v) const {
    int w = 0;
    for (const Gpp& g : pendants[v]) w += g.weight();
    return w;
  }

  bool is_starlike(int v) const {
    return pendants[v].size() >= 2 && tree_degree(v) >= 3;
  }

  // validates all structural invariants; throws std::logic_error on breach
  void check() const {
    const int k = skeleton.n();
    if (static_cast<int>(pendants.size()) != k)
      throw std::logic_error("GppTree: pendant table size mismatch");
    int total = k;
    for (int v = 0; v < k; ++v) {
      for (const Gpp& g : pendants[v]) {
        if (!g.valid()) throw std::logic_error("GppTree: invalid gpp");
        total += g.weight();
      }
      if (k > 1 && skeleton.degree(v) == 1 && pendants[v].empty())
        throw std::logic_error("GppTree: bare skeleton leaf");
    }
    if (total != n_total)
      throw std::logic_error("GppTree: vertex count not conserved");
  }
};

struct StarlikeEntry {
  int vertex = 0;
  int weight = 0;
};

// starlike vertices (tree degree >= 3 carrying >= 2 gpps), ascending by
// weight, ties by vertex id
struct StarlikeReport {
  std::vector<StarlikeEntry> vertices;
};

inline StarlikeReport starlike_vertices(const GppTree& rep) {
  StarlikeReport out;
  for (int v = 0; v < rep.skeleton.n(); ++v)
    if (rep.is_starlike(v)) out.vertices.push_back({v, rep.weight(v)});
  std::sort(out.vertices.begin(), out.vertices.end(),
            [](const StarlikeEntry& a, const StarlikeEntry& b) {
              return a.weight != b.weight ? a.weight < b.weight
                                          : a.vertex < b.vertex;
            });
  return out;
}

// Pendant-path replacement conventions: a maximal pendant path of m vertices
// becomes (1,0) for m=1, (0,1) for m=2, (m-2,1) for m>=3.
inline Gpp pendant_path_gpp(int m) {
  if (m == 1) return {1, 0};
  if (m == 2) return {0, 1};
  return {m - 2, 1};
}

// Builds the initial representation. Trees with a branching vertex strip
// every maximal pendant path onto its branching anchor; pure paths follow
// the documented end conventions (both ends become gpps, the connecting path
// is the skeleton, at least one skeleton vertex always remains).
inline GppTree initiate_representation(const Tree& t) {
  const int n = t.n();
  if (n < 2)
    throw std::invalid_argument("initiate_representation: requires n >= 2");

  bool has_branch = false;
  for (int v = 0; v < n && !has_branch; ++v)
    if (t.degree(v) >= 3) has_branch = true;

  std::vector<char> removed(n, 0);
  std::map<int, std::vector<Gpp>> pend;  // keyed by original vertex id

  if (!has_branch) {
    // lay the path out as a[0..n-1], a[0] = smallest-id endpoint
    std::vector<int> a;
    int start = -1;
    for (int v = 0; v < n; ++v)
      if (t.degree(v) == 1) {
        start = v;
        break;
      }
    int prev = -1, cur = start;
    while (true) {
      a.push_back(cur);
      int nxt = -1;
      for (int u : t.neighbors(cur))
        if (u != prev) nxt = u;
      if (nxt == -1) break;
      prev = cur;
      cur = nxt;
    }
    auto keep_range = [&](int lo, int hi) {  // inclusive positions kept
      for (int i = 0; i < n; ++i)
        if (i < lo || i > hi) removed[a[i]] = 1;
    };
    if (n == 2) {
      keep_range(0, 0);
      pend[a[0]] = {{1, 0}};
    } else if (n == 3) {
      keep_range(1, 1);
      pend[a[1]] = {{1, 0}, {1, 0}};
    } else if (n == 4) {
      keep_range(1, 1);
      pend[a[1]] = {{1, 0}, {0, 1}};
    } else if (n == 5) {
      keep_range(2, 2);
      pend[a[2]] = {{0, 1}, {0, 1}};
    } else {
      keep_range(2, n - 3);
      pend[a[2]].push_back({0, 1});
      pend[a[n - 3]].push_back({0, 1});
    }
  } else {
    for (int leaf = 0; leaf < n; ++leaf) {
      if (t.degree(leaf) != 1) continue;
      int m = 1, prev = -1, cur = leaf;
      int anchor = -1;
      while (anchor == -1) {
        int nxt = -1;
        for (int u : t.neighbors(cur))
          if (u != prev) nxt = u;
        if (t.degree(nxt) >= 3) {
          anchor = nxt;
        } else {
          removed[cur] = 1;
          ++m;
          prev = cur;
          cur = nxt;
        }
      }
      removed[cur] = 1;
      pend[anchor].push_back(pendant_path_gpp(m));
    }
  }

  // relabel retained vertices densely in ascending original-id order
  std::vector<int> dense_of(n, -1);
  int k = 0;
  for (int v = 0; v < n; ++v)
    if (!removed[v]) dense_of[v] = k++;
  std::vector<std::pair<int, int>> skel_edges;
  for (const auto& [u, v] : t.edges())
    if (!removed[u] && !removed[v])
      skel_edges.emplace_back(dense_of[u], dense_of[v]);
  std::vector<std::vector<Gpp>> pendants(k);
  for (const auto& [orig, gpps] : pend) pendants[dense_of[orig]] = gpps;

  GppTree rep(Tree(k, skel_edges), std::move(pendants), n);
  rep.check();
  return rep;
}

// Reconstructs a concrete tree: skeleton vertices keep their ids, gpp
// vertices are appended deterministically (vertices ascending, gpps in list
// order, path before sun, rays in order).
inline Tree expand(const GppTree& rep) {
  const int k = rep.skeleton.n();
  std::vector<std::pair<int, int>> edges;
  for (const auto& [u, v] : rep.skeleton.edges()) edges.emplace_back(u, v);
  int next = k;
  for (int v = 0; v < k; ++v) {
    for (const Gpp& g : rep.pendants[v]) {
      int center = v;
      for (int i = 0; i < g.q; ++i) {
        edges.emplace_back(center, next);
        center = next++;
      }
      for (int i = 0; i < g.r; ++i) {
        const int mid = next++, tip = next++;
        edges.emplace_back(center, mid);
        edges.emplace_back(mid, tip);
      }
    }
  }
  if (next != rep.n_total)
    throw std::logic_error("expand: vertex count mismatch");
  return Tree(rep.n_total, edges);
}

// ids, under expand()'s labeling, of the vertices carrying each gpp's rays
// (the anchor itself for q = 0, the far end of the path otherwise); gpps
// with r = 0 contribute none
inline std::vector<int> sun_centers(const GppTree& rep) {
  const int k = rep.skeleton.n();
  std::vector<int> centers;
  int next = k;
  for (int v = 0; v < k; ++v) {
    for (const Gpp& g : rep.pendants[v]) {
      int center = v;
      for (int i = 0; i < g.q; ++i) center = next++;
      if (g.r >= 1) centers.push_back(center);
      next += 2 * g.r;
    }
  }
  return centers;
}

inline std::string render(const Gpp& g) {
  return "P_" + std::to_string(g.q) + "*S_" + std::to_string(g.r);
}

inline std::string render(const std::vector<Gpp>& gpps) {
  std::string out;
  for (std::size_t i = 0; i < gpps.size(); ++i) {
    if (i) out += " \xE2\x8A\x95 ";  // " ⊕ "
    out += render(gpps[i]);
  }
  return out;
}

// "u + P_q*S_r ⊕ …" for a single-anchor tree; multi-vertex skeletons list
// each carrying vertex as "u<id> + …", joined with " | ".
inline std::string render(const GppTree& rep) {
  const int k = rep.skeleton.n();
  if (k == 1) return "u + " + render(rep.pendants[0]);
  std::string out;
  for (int v = 0; v < k; ++v) {
    if (rep.pendants[v].empty()) continue;
    if (!out.empty()) out += " | ";
    out += "u" + std::to_string(v) + " + " + render(rep.pendants[v]);
  }
  return out;
}

// The sign recurrences at x = -d_n that govern pendant-path diagonal values:
//   x_1 = -1 + 2/n,            x_{j+1} = 2/n - 1/x_j
//   b_1 = x_1 + r(1 - 1/x_2),  b_{j+1} = 2/n - 1/b_j
// Returns (x_j, b_j(r)). Terms are provably nonzero along the way; hitting
// zero means a broken invariant, not a user error.
inline std::pair<Rational, Rational> pendant_recurrence(int n, int r, int j) {
  if (n < 3) throw std::invalid_argument("pendant_recurrence: requires n >= 3");
  if (j < 1) throw std::invalid_argument("pendant_recurrence: requires j >= 1");
  if (r < 0) throw std::invalid_argument("pendant_recurrence: requires r >= 0");
  const Rational two_over_n(2, n);
  auto advance = [&](Rational val, const char* which) {
    if (val.is_zero())
      throw std::logic_error(std::string("pendant_recurrence: zero ") + which);
    return two_over_n - inverse(val);
  };
  const Rational x1 = Rational(-1) + two_over_n;
  const Rational x2 = advance(x1, "x_j");
  Rational xj = x1;
  for (int i = 1; i < j; ++i) xj = advance(xj, "x_j");
  Rational bj = x1 + Rational(r) * (Rational(1) - inverse(x2));
  for (int i = 1; i < j; ++i) bj = advance(bj, "b_j");
  return {xj, bj};
}

// Threshold r_0(n): b_1(r) < 0 exactly for integer r <= floor(r_0).
inline Rational r0(int n) {
  if (n < 3) throw std::invalid_argument("r0: requires n >= 3");
  const long nl = n;
  return Rational((nl - 2) * (nl * nl + 2 * nl - 4), 4 * nl * (nl - 1));
}

}  // namespace lapdist
