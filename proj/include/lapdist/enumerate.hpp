// Exhaustive tree enumeration and the two verification drivers: the
// eigenvalue-count bound checked over every tree of each order, and the
// transformation pipeline checked to terminate at the prototype.
//
// Free (unlabeled) trees are generated as rooted level sequences in the
// Beyer–Hedetniemi successor order, keeping exactly those sequences that are
// the canonical root-at-centroid form of their tree, so each isomorphism
// class appears once.
#pragma once

#include "lapdist/diagonalize.hpp"
#include "lapdist/gpp.hpp"
#include "lapdist/transform.hpp"
#include "lapdist/tree.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace lapdist {

namespace detail {

// level sequence -> parent edges (vertex i at depth L[i], preorder)
inline std::vector<std::pair<int, int>> level_seq_edges(
    const std::vector<int>& L) {
  std::vector<int> stack;
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < static_cast<int>(L.size()); ++v) {
    while (!stack.empty() && L[stack.back()] >= L[v]) stack.pop_back();
    if (!stack.empty()) edges.emplace_back(stack.back(), v);
    stack.push_back(v);
  }
  return edges;
}

// canonical (lexicographically greatest) level sequence of the tree rooted
// at `root`: children subtrees sorted descending, shifted one level down
inline std::vector<int> canon_rooted_levels(
    const std::vector<std::vector<int>>& adj, int root) {
  std::function<std::vector<int>(int, int)> rec = [&](int v, int parent) {
    std::vector<std::vector<int>> subs;
    for (int c : adj[v])
      if (c != parent) subs.push_back(rec(c, v));
    std::sort(subs.begin(), subs.end(), std::greater<>());
    std::vector<int> out{0};
    for (const auto& s : subs)
      for (int x : s) out.push_back(x + 1);
    return out;
  };
  return rec(root, -1);
}

inline std::vector<int> centroids(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  if (n == 1) return {0};
  std::vector<int> size(n, 1), parent(n, -1), order;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : adj[v]) {
      if (!seen[c]) {
        seen[c] = 1;
        parent[c] = v;
        stack.push_back(c);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (parent[*it] >= 0) size[parent[*it]] += size[*it];
  int best = n + 1;
  std::vector<int> out;
  for (int v = 0; v < n; ++v) {
    int m = n - size[v];
    for (int c : adj[v])
      if (c != parent[v]) m = std::max(m, size[c]);
    if (m < best) {
      best = m;
      out.assign(1, v);
    } else if (m == best) {
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace detail

// All free trees of order n, one representative per isomorphism class.
inline std::vector<Tree> free_trees(int n) {
  if (n < 1 || n > 20)
    throw std::invalid_argument("free_trees: n must be in [1, 20]");
  std::vector<Tree> out;
  if (n == 1) {
    out.emplace_back(1, std::vector<std::pair<int, int>>{});
    return out;
  }
  std::vector<int> L(n);
  std::iota(L.begin(), L.end(), 0);  // the rooted path, first in the order
  while (true) {
    const auto edges = detail::level_seq_edges(L);
    std::vector<std::vector<int>> adj(n);
    for (const auto& [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<int> best;
    for (int c : detail::centroids(adj)) {
      auto cand = detail::canon_rooted_levels(adj, c);
      if (best.empty() || cand > best) best = std::move(cand);
    }
    if (L == best) out.emplace_back(n, edges);
    int p = -1;
    for (int i = n - 1; i >= 0; --i) {
      if (L[i] > 1) {
        p = i;
        break;
      }
    }
    if (p == -1) break;  // reached the star: enumeration complete
    int q = p - 1;
    while (L[q] != L[p] - 1) --q;
    for (int i = p; i < n; ++i) L[i] = L[i - (p - q)];
  }
  return out;
}

struct ConjectureViolation {
  Tree tree;
  long below_dn = 0;   // eigenvalues in [0, d_n)
  long below_two = 0;  // eigenvalues in [0, 2)
  long required = 0;   // ceil(n/2)
};

struct VerifyReport {
  int n_lo = 0;
  int n_hi = 0;
  long trees_checked = 0;
  std::vector<ConjectureViolation> violations;
  long min_margin = 0;  // min over trees of below_dn - required
  double wall_seconds = 0.0;
};

struct PipelineFailure {
  Tree tree;
  std::string reason;
};

struct PipelineReport {
  int n_lo = 0;
  int n_hi = 0;
  long trees_checked = 0;
  std::vector<PipelineFailure> failures;
  double wall_seconds = 0.0;
};

namespace detail {

// single-producer multi-consumer tree queue
class TreeQueue {
 public:
  void push(Tree t) {
    {
      std::lock_guard<std::mutex> lk(m_);
      q_.push_back(std::move(t));
    }
    cv_.notify_one();
  }
  void close() {
    {
      std::lock_guard<std::mutex> lk(m_);
      closed_ = true;
    }
    cv_.notify_all();
  }
  std::optional<Tree> pop() {
    std::unique_lock<std::mutex> lk(m_);
    cv_.wait(lk, [&] { return !q_.empty() || closed_; });
    if (q_.empty()) return std::nullopt;
    Tree t = std::move(q_.front());
    q_.pop_front();
    return t;
  }

 private:
  std::mutex m_;
  std::condition_variable cv_;
  std::deque<Tree> q_;
  bool closed_ = false;
};

// generator thread feeding `workers` checker threads; partial results merge
// as a monoid: counts add, margins take min, lists concatenate
template <typename Partial, typename CheckOne>
Partial run_over_free_trees(int n_lo, int n_hi, int workers,
                            CheckOne check_one) {
  TreeQueue queue;
  std::exception_ptr gen_error;
  std::thread generator([&] {
    try {
      for (int n = n_lo; n <= n_hi; ++n)
        for (Tree& t : free_trees(n)) queue.push(std::move(t));
    } catch (...) {
      gen_error = std::current_exception();
    }
    queue.close();
  });
  std::vector<Partial> partials(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        while (auto t = queue.pop()) check_one(*t, partials[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  generator.join();
  for (auto& th : pool) th.join();
  if (gen_error) std::rethrow_exception(gen_error);
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  Partial total;
  for (Partial& p : partials) total.merge(std::move(p));
  return total;
}

struct ConjecturePartial {
  long checked = 0;
  long min_margin = std::numeric_limits<long>::max();
  std::vector<ConjectureViolation> violations;
  void merge(ConjecturePartial&& o) {
    checked += o.checked;
    min_margin = std::min(min_margin, o.min_margin);
    violations.insert(violations.end(),
                      std::make_move_iterator(o.violations.begin()),
                      std::make_move_iterator(o.violations.end()));
  }
};

struct PipelinePartial {
  long checked = 0;
  std::vector<PipelineFailure> failures;
  void merge(PipelinePartial&& o) {
    checked += o.checked;
    failures.insert(failures.end(),
                    std::make_move_iterator(o.failures.begin()),
                    std::make_move_iterator(o.failures.end()));
  }
};

}  // namespace detail

// Checks, exactly, that every tree of every order in [2, n_max] has at least
// ceil(n/2) Laplacian eigenvalues below the average degree d_n = 2 - 2/n,
// and at least as many below 2.
inline VerifyReport verify_conjecture(int n_max, int workers = 1) {
  if (n_max < 2)
    throw std::invalid_argument("verify_conjecture: n_max must be >= 2");
  if (n_max > 20)
    throw std::invalid_argument("verify_conjecture: n_max must be <= 20");
  if (workers < 1)
    throw std::invalid_argument("verify_conjecture: workers must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  auto partial = detail::run_over_free_trees<detail::ConjecturePartial>(
      2, n_max, workers, [](const Tree& t, detail::ConjecturePartial& acc) {
        const int n = t.n();
        const long need = (n + 1) / 2;
        const long below_dn = sigma(t).m_below;
        const long below_two = inertia(t, Rational(2)).negative;
        acc.checked += 1;
        acc.min_margin = std::min(acc.min_margin, below_dn - need);
        if (below_dn < need || below_two < need)
          acc.violations.push_back({t, below_dn, below_two, need});
      });
  VerifyReport report;
  report.n_lo = 2;
  report.n_hi = n_max;
  report.trees_checked = partial.checked;
  report.violations = std::move(partial.violations);
  report.min_margin = partial.min_margin;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

// Runs the full transformation on every free tree of each order in
// [n_lo, n_hi] with per-step certification on, and verifies the final form
// is isomorphic to the order's prototype. Any engine error (properness
// violation, non-termination guard, invariant breach) is collected as a
// failure with its reason.
inline PipelineReport verify_pipeline(int n_lo, int n_hi, int workers = 1) {
  if (n_lo < 8)
    throw std::invalid_argument("verify_pipeline: n_lo must be >= 8");
  if (n_hi < n_lo)
    throw std::invalid_argument("verify_pipeline: empty order range");
  if (n_hi > 20)
    throw std::invalid_argument("verify_pipeline: n_hi must be <= 20");
  if (workers < 1)
    throw std::invalid_argument("verify_pipeline: workers must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  auto partial = detail::run_over_free_trees<detail::PipelinePartial>(
      n_lo, n_hi, workers, [](const Tree& t, detail::PipelinePartial& acc) {
        acc.checked += 1;
        try {
          const Trace trace = transform(t, /*verify=*/true);
          if (canonical_code(expand(trace.final)) !=
              canonical_code(expand(prototype(t.n()))))
            acc.failures.push_back({t, "final form is not the prototype"});
        } catch (const std::exception& ex) {
          acc.failures.push_back({t, ex.what()});
        }
      });
  PipelineReport report;
  report.n_lo = n_lo;
  report.n_hi = n_hi;
  report.trees_checked = partial.checked;
  report.failures = std::move(partial.failures);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace lapdist
