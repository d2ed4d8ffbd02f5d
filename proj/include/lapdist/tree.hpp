// Free-tree data model: validated construction, CSR adjacency, rooted views
// with child-before-parent processing order, Prüfer random generation, AHU
// canonical codes, and the edge-list text format.
#pragma once

#include "lapdist/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lapdist {

enum class TreeError {
  WrongEdgeCount,
  IdOutOfRange,
  SelfLoop,
  DuplicateEdge,
  Disconnected,
};

struct TreeBuildError : std::runtime_error {
  TreeError code;
  TreeBuildError(TreeError c, const std::string& msg)
      : std::runtime_error(msg), code(c) {}
};

// Vertex-labeled free tree with ids 0..n-1. Immutable after construction;
// adjacency is CSR so million-vertex trees stay cache-friendly.
class Tree {
public:
  Tree(int n, std::vector<std::pair<int, int>> edges)
      : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw TreeBuildError(TreeError::WrongEdgeCount, "tree needs n >= 1");
    if (static_cast<int>(edges_.size()) != n_ - 1)
      throw TreeBuildError(TreeError::WrongEdgeCount,
                           "expected " + std::to_string(n_ - 1) + " edges, got " +
                               std::to_string(edges_.size()));
    for (auto& [u, v] : edges_) {
      if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw TreeBuildError(TreeError::IdOutOfRange,
                             "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                 ") out of range");
      if (u == v)
        throw TreeBuildError(TreeError::SelfLoop, "self-loop at " + std::to_string(u));
    }
    build_adjacency();
    check_simple_connected();
  }

  int n() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int degree(int v) const { return off_[v + 1] - off_[v]; }
  std::span<const int> neighbors(int v) const {
    return {dat_.data() + off_[v], dat_.data() + off_[v + 1]};
  }

private:
  void build_adjacency() {
    off_.assign(n_ + 1, 0);
    for (auto& [u, v] : edges_) {
      ++off_[u + 1];
      ++off_[v + 1];
    }
    for (int i = 0; i < n_; ++i) off_[i + 1] += off_[i];
    dat_.resize(2 * (n_ - 1));
    std::vector<int> cur(off_.begin(), off_.end() - 1);
    for (auto& [u, v] : edges_) {
      dat_[cur[u]++] = v;
      dat_[cur[v]++] = u;
    }
  }

  void check_simple_connected() const {
    // duplicate detection: sort each vertex's neighbor list copy
    for (int v = 0; v < n_; ++v) {
      std::vector<int> nb(neighbors(v).begin(), neighbors(v).end());
      std::sort(nb.begin(), nb.end());
      if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
        throw TreeBuildError(TreeError::DuplicateEdge,
                             "duplicate edge at vertex " + std::to_string(v));
    }
    // connectivity: n-1 simple edges + connected => tree
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : neighbors(x))
        if (!seen[y]) {
          seen[y] = 1;
          ++cnt;
          stack.push_back(y);
        }
    }
    if (cnt != n_) throw TreeBuildError(TreeError::Disconnected, "input is disconnected");
  }

  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> off_;
  std::vector<int> dat_;
};

inline Tree from_edge_list(int n, const std::vector<std::pair<int, int>>& edges) {
  return Tree(n, edges);
}

// Average Laplacian eigenvalue of a tree: d_n = 2 - 2/n.
inline Rational average_degree(int n) {
  if (n < 1) throw std::invalid_argument("average_degree: n >= 1 required");
  return Rational(2) - Rational(2, n);
}

// Rooted view: `order` lists every vertex exactly once, children before
// parents, root last (reverse preorder of a DFS).
struct RootedTree {
  const Tree* base;
  int root;
  std::vector<int> parent;  // parent[root] == -1
  std::vector<int> order;

  RootedTree(const Tree& t, int r) : base(&t), root(r) {
    const int n = t.n();
    if (r < 0 || r >= n) throw std::invalid_argument("root out of range");
    parent.assign(n, -1);
    order.clear();
    order.reserve(n);
    std::vector<int> stack{r};
    std::vector<char> seen(n, 0);
    seen[r] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      order.push_back(x);
      for (int y : t.neighbors(x))
        if (!seen[y]) {
          seen[y] = 1;
          parent[y] = x;
          stack.push_back(y);
        }
    }
    std::reverse(order.begin(), order.end());
  }
};

// Prüfer decode: sequence of length n-2 over 0..n-1 -> labeled tree edges.
inline std::vector<std::pair<int, int>> prufer_decode(const std::vector<int>& seq, int n) {
  if (n < 1) throw std::invalid_argument("prufer_decode: n >= 1 required");
  if (static_cast<int>(seq.size()) != std::max(0, n - 2))
    throw std::invalid_argument("prufer_decode: sequence length must be n-2");
  for (int x : seq)
    if (x < 0 || x >= n)
      throw std::invalid_argument("prufer_decode: label out of range");
  if (n == 1) return {};
  if (n == 2) return {{0, 1}};
  std::vector<int> deg(n, 1);
  for (int x : seq) ++deg[x];
  std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
  for (int v = 0; v < n; ++v)
    if (deg[v] == 1) leaves.push(v);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n - 1);
  for (int x : seq) {
    int leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, x);
    if (--deg[x] == 1) leaves.push(x);
  }
  int u = leaves.top();
  leaves.pop();
  int v = leaves.top();
  edges.emplace_back(u, v);
  return edges;
}

// Uniform labeled tree, deterministic per seed (Prüfer bijection).
inline Tree random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_tree: n >= 1 required");
  std::mt19937_64 rng(seed);
  std::vector<int> seq;
  if (n > 2) {
    seq.resize(n - 2);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (auto& x : seq) x = pick(rng);
  }
  return Tree(n, prufer_decode(seq, n));
}

namespace detail {

// Tree centers (1 or 2): repeatedly peel leaves.
inline std::vector<int> centers(const Tree& t) {
  const int n = t.n();
  if (n == 1) return {0};
  if (n == 2) return {0, 1};
  std::vector<int> deg(n);
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    deg[v] = t.degree(v);
    if (deg[v] == 1) layer.push_back(v);
  }
  int remaining = n;
  std::vector<char> removed(n, 0);
  while (remaining > 2) {
    std::vector<int> next;
    for (int v : layer) removed[v] = 1;
    remaining -= static_cast<int>(layer.size());
    for (int v : layer)
      for (int w : t.neighbors(v))
        if (!removed[w] && --deg[w] == 1) next.push_back(w);
    layer.swap(next);
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (!removed[v]) out.push_back(v);
  return out;
}

inline std::string ahu_code(const Tree& t, int root) {
  RootedTree rt(t, root);
  std::vector<std::string> code(t.n());
  for (int v : rt.order) {
    std::vector<std::string> ch;
    for (int w : t.neighbors(v))
      if (w != rt.parent[v]) ch.push_back(std::move(code[w]));
    std::sort(ch.begin(), ch.end());
    std::string s = "(";
    for (auto& c : ch) s += c;
    s += ")";
    code[v] = std::move(s);
  }
  return code[root];
}

}  // namespace detail

// AHU canonical code rooted at the center(s); equal codes iff isomorphic.
inline std::string canonical_code(const Tree& t) {
  auto cs = detail::centers(t);
  std::string best = detail::ahu_code(t, cs[0]);
  for (std::size_t i = 1; i < cs.size(); ++i)
    best = std::min(best, detail::ahu_code(t, cs[i]));
  return best;
}

// ---- edge-list text format: first line "n", then "u v" pairs, '#' comments.

inline Tree parse_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string rest;
    if (n < 0) {
      if (!(ls >> n) || n < 1)
        throw TreeBuildError(TreeError::WrongEdgeCount,
                             "line " + std::to_string(lineno) +
                                 ": expected vertex count >= 1");
      if (ls >> rest)
        throw TreeBuildError(TreeError::WrongEdgeCount,
                             "line " + std::to_string(lineno) +
                                 ": trailing text after vertex count");
      continue;
    }
    int u, v;
    if (!(ls >> u >> v))
      throw TreeBuildError(TreeError::WrongEdgeCount,
                           "line " + std::to_string(lineno) +
                               ": expected 'u v'");
    if (ls >> rest)
      throw TreeBuildError(TreeError::WrongEdgeCount,
                           "line " + std::to_string(lineno) +
                               ": trailing text after edge");
    edges.emplace_back(u, v);
  }
  if (n < 0) throw TreeBuildError(TreeError::WrongEdgeCount, "missing vertex count line");
  return Tree(n, edges);
}

inline std::string render_edge_list(const Tree& t) {
  std::string out = std::to_string(t.n()) + "\n";
  for (auto [u, v] : t.edges())
    out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

}  // namespace lapdist
