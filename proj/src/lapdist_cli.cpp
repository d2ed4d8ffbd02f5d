// lapdist: count Laplacian eigenvalues of trees in intervals, verify the
// below-average-degree bound exhaustively, and reduce trees to their
// prototype by proper transformations, with machine-readable traces.
//
// Exit codes: 0 success; 1 a checked property was violated (witness
// serialized); 2 usage or malformed input.
#include "lapdist/diagonalize.hpp"
#include "lapdist/enumerate.hpp"
#include "lapdist/gpp.hpp"
#include "lapdist/oracle.hpp"
#include "lapdist/trace_io.hpp"
#include "lapdist/transform.hpp"
#include "lapdist/tree.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

lapdist::Tree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return lapdist::parse_edge_list(in);
}

lapdist::Rational parse_rational(const std::string& s) {
  try {
    return lapdist::Rational::parse(s);
  } catch (const std::exception&) {
    throw CLI::ValidationError("expected a rational like 8/5, got '" + s + "'");
  }
}

std::uint64_t bench_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LAPDIST_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 1;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

int cmd_sigma(const std::string& file, bool use_float) {
  const lapdist::Tree t = load_tree(file);
  const int n = t.n();
  const lapdist::Rational dn = lapdist::average_degree(n);
  if (use_float) {
    const auto fc = lapdist::float_counts(t, dn.to_double());
    if (fc.ambiguous > 0) {
      std::cerr << "float pass flagged " << fc.ambiguous
                << " ambiguous sign(s) at tolerance 1e-9; re-run with --exact"
                << std::endl;
      return kExitUsage;
    }
    std::cout << "n=" << n << " d_n=" << dn.str() << " m_below=" << fc.negative
              << " sigma=" << fc.positive << std::endl;
    return kExitSuccess;
  }
  const auto s = lapdist::sigma(t);
  std::cout << "n=" << n << " d_n=" << dn.str() << " m_below=" << s.m_below
            << " sigma=" << s.sigma << std::endl;
  return kExitSuccess;
}

int cmd_count(const std::string& file, const std::string& lo_s,
              const std::string& hi_s, bool lo_open, bool hi_open,
              bool use_float) {
  const lapdist::Tree t = load_tree(file);
  const lapdist::Rational lo = parse_rational(lo_s);
  const lapdist::Rational hi = parse_rational(hi_s);
  const std::string ivl = std::string(lo_open ? "(" : "[") + lo.str() + ", " +
                          hi.str() + (hi_open ? ")" : "]");
  if (use_float) {
    const auto at_lo = lapdist::float_counts(t, lo.to_double());
    const auto at_hi = lapdist::float_counts(t, hi.to_double());
    if (at_lo.ambiguous > 0 || at_hi.ambiguous > 0) {
      std::cerr << "float pass flagged " << (at_lo.ambiguous + at_hi.ambiguous)
                << " ambiguous sign(s) at tolerance 1e-9; re-run with --exact"
                << std::endl;
      return kExitUsage;
    }
    std::cout << "n=" << t.n() << " interval=" << ivl
              << " count=" << (at_hi.negative - at_lo.negative) << std::endl;
    return kExitSuccess;
  }
  const int count = lapdist::count_interval(t, lo, hi, !lo_open, !hi_open);
  std::cout << "n=" << t.n() << " interval=" << ivl << " count=" << count
            << std::endl;
  return kExitSuccess;
}

int cmd_verify(int max_n, int jobs, bool pipeline, int from_n) {
  if (pipeline) {
    const auto rep = lapdist::verify_pipeline(from_n, max_n, jobs);
    std::cout << "pipeline: " << rep.trees_checked << " trees for "
              << rep.n_lo << " <= n <= " << rep.n_hi << ": "
              << rep.failures.size() << " failures (" << std::fixed
              << rep.wall_seconds << "s)" << std::endl;
    if (!rep.failures.empty()) {
      for (const auto& f : rep.failures) {
        std::cerr << "failure: " << f.reason << "\n"
                  << lapdist::render_edge_list(f.tree);
      }
      return kExitViolation;
    }
    return kExitSuccess;
  }
  for (int n = 2; n <= max_n; ++n) {
    const auto count = lapdist::free_trees(n).size();
    std::cout << count << (count == 1 ? " tree" : " trees") << " at n=" << n
              << std::endl;
  }
  const auto rep = lapdist::verify_conjecture(max_n, jobs);
  std::cout << "checked " << rep.trees_checked << " trees for " << rep.n_lo
            << " <= n <= " << rep.n_hi << ": " << rep.violations.size()
            << " violations (min margin " << rep.min_margin << ", "
            << std::fixed << rep.wall_seconds << "s)" << std::endl;
  if (!rep.violations.empty()) {
    for (const auto& v : rep.violations) {
      std::cerr << "violation: m[0,d_n)=" << v.below_dn
                << " m[0,2)=" << v.below_two << " required=" << v.required
                << "\n"
                << lapdist::render_edge_list(v.tree);
    }
    return kExitViolation;
  }
  return kExitSuccess;
}

int cmd_transform(const std::string& file, const std::string& trace_path,
                  const std::string& dot_path, bool no_verify) {
  const lapdist::Tree t = load_tree(file);
  lapdist::Trace trace =
      no_verify ? lapdist::transform(t, false) : lapdist::transform(t);
  const lapdist::Tree final_tree = lapdist::expand(trace.final);
  std::cout << "n=" << t.n() << " steps=" << trace.steps.size()
            << " final=" << lapdist::render(trace.final) << std::endl;
  std::cout << "final canonical code: " << lapdist::canonical_code(final_tree)
            << std::endl;
  if (!trace_path.empty())
    write_file(trace_path, lapdist::trace_to_jsonl(trace));
  if (!dot_path.empty()) write_file(dot_path, lapdist::to_dot(trace.final));
  return kExitSuccess;
}

// replay: parse the trace, re-run the pipeline on its initial tree, and
// require the same step sequence and final canonical code
int cmd_replay(const std::string& trace_path) {
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open '" + trace_path + "'");
  const lapdist::Trace stored = lapdist::trace_from_jsonl(in);
  const lapdist::Trace fresh = lapdist::transform(stored.initial);
  const std::string code_stored =
      lapdist::canonical_code(lapdist::expand(stored.final));
  const std::string code_fresh =
      lapdist::canonical_code(lapdist::expand(fresh.final));
  bool same_steps = stored.steps.size() == fresh.steps.size();
  for (std::size_t i = 0; same_steps && i < stored.steps.size(); ++i) {
    const auto& a = stored.steps[i];
    const auto& b = fresh.steps[i];
    same_steps = a.kind == b.kind && a.vertex == b.vertex &&
                 a.before == b.before && a.after == b.after;
  }
  std::cout << "replayed " << fresh.steps.size() << " steps" << std::endl;
  std::cout << "final canonical code: " << code_fresh << std::endl;
  if (code_stored != code_fresh || !same_steps) {
    std::cerr << "replay diverged from stored trace" << std::endl;
    return kExitViolation;
  }
  return kExitSuccess;
}

int cmd_prototype(int n, const std::string& dot_path,
                  const std::string& edges_path) {
  const lapdist::GppTree proto = lapdist::prototype(n);
  std::cout << lapdist::render(proto) << std::endl;
  if (!dot_path.empty()) write_file(dot_path, lapdist::to_dot(proto));
  if (!edges_path.empty())
    write_file(edges_path, lapdist::render_edge_list(lapdist::expand(proto)));
  return kExitSuccess;
}

int cmd_bench(int n, const std::string& mode,
              const std::optional<std::uint64_t>& seed_flag) {
  const std::uint64_t seed = bench_seed(seed_flag);
  const lapdist::Tree t = lapdist::random_tree(n, seed);
  const auto t0 = std::chrono::steady_clock::now();
  if (mode == "float") {
    const auto fc =
        lapdist::float_counts(t, lapdist::average_degree(n).to_double());
    const double el =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cout << "bench float n=" << n << " seed=" << seed
              << " positive=" << fc.positive << " negative=" << fc.negative
              << " ambiguous=" << fc.ambiguous
              << " sum=" << (fc.positive + fc.negative + fc.ambiguous)
              << " time=" << std::fixed << el << "s" << std::endl;
  } else {
    const auto s = lapdist::sigma(t);
    const double el =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cout << "bench exact n=" << n << " seed=" << seed
              << " sigma=" << s.sigma << " m_below=" << s.m_below
              << " time=" << std::fixed << el << "s" << std::endl;
  }
  return kExitSuccess;
}

int cmd_enumerate(int n, int jobs, bool print_codes) {
  // sigma histogram over every free tree of order n, computed by the same
  // generator/worker pool as verification
  struct Partial {
    long count = 0;
    std::map<int, long> hist;
    std::vector<std::string> codes;
    void merge(Partial&& o) {
      count += o.count;
      for (const auto& [k, v] : o.hist) hist[k] += v;
      codes.insert(codes.end(), std::make_move_iterator(o.codes.begin()),
                   std::make_move_iterator(o.codes.end()));
    }
  };
  auto partial = lapdist::detail::run_over_free_trees<Partial>(
      n, n, jobs, [print_codes](const lapdist::Tree& t, Partial& acc) {
        acc.count += 1;
        acc.hist[t.n() == 1 ? 0 : lapdist::sigma(t).sigma] += 1;
        if (print_codes) acc.codes.push_back(lapdist::canonical_code(t));
      });
  std::cout << partial.count << (partial.count == 1 ? " tree" : " trees")
            << " of order " << n << std::endl;
  for (const auto& [s, c] : partial.hist)
    std::cout << "sigma=" << s << ": " << c << std::endl;
  if (print_codes) {
    std::sort(partial.codes.begin(), partial.codes.end());
    for (const auto& code : partial.codes) std::cout << code << std::endl;
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lapdist: Laplacian eigenvalue counting and proper transformations on "
      "trees"};
  app.require_subcommand(1);

  std::string file, lo = "0", hi = "2", trace_path, dot_path, edges_path,
              replay_path, mode = "float";
  bool use_float = false, use_exact = false, lo_open = false, hi_open = false,
       pipeline = false, no_verify = false, print_codes = false;
  int max_n = 10, jobs = 1, n_proto = 8, n_bench = 100000, n_enum = 8,
      from_n = 8;
  std::optional<std::uint64_t> seed_flag;

  auto add_float_flags = [&](CLI::App* cmd) {
    auto* f = cmd->add_flag("--float", use_float, "fast float-filter mode");
    cmd->add_flag("--exact", use_exact, "exact rational mode (default)")
        ->excludes(f);
  };

  auto* sigma_cmd = app.add_subcommand(
      "sigma", "count eigenvalues below/above the average degree d_n");
  sigma_cmd->add_option("file", file, "edge-list file")->required();
  add_float_flags(sigma_cmd);

  auto* count_cmd =
      app.add_subcommand("count", "count eigenvalues in an interval");
  count_cmd->add_option("file", file, "edge-list file")->required();
  count_cmd->add_option("--lo", lo, "interval lower endpoint (rational)");
  count_cmd->add_option("--hi", hi, "interval upper endpoint (rational)");
  count_cmd->add_flag("--lo-open", lo_open, "exclude the lower endpoint");
  count_cmd->add_flag("--hi-open", hi_open, "exclude the upper endpoint");
  add_float_flags(count_cmd);

  auto* verify_cmd = app.add_subcommand(
      "verify", "exhaustively verify the eigenvalue bound (or the pipeline)");
  verify_cmd->add_option("--max-n", max_n, "largest order to check")
      ->check(CLI::Range(2, 20));
  verify_cmd->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::Range(1, 256));
  verify_cmd->add_flag("--pipeline", pipeline,
                       "verify transform() reaches the prototype instead");
  verify_cmd->add_option("--from", from_n, "smallest order (pipeline mode)")
      ->check(CLI::Range(8, 20));

  auto* transform_cmd = app.add_subcommand(
      "transform", "reduce a tree to its prototype, recording every step");
  transform_cmd->add_option("file", file, "edge-list file");
  transform_cmd->add_option("--trace", trace_path, "write the step trace");
  transform_cmd->add_option("--dot", dot_path, "write the final form as DOT");
  transform_cmd->add_flag("--no-verify", no_verify,
                          "skip per-step sigma certification");
  transform_cmd->add_option("--replay", replay_path,
                            "re-run a stored trace and check determinism");

  auto* proto_cmd =
      app.add_subcommand("prototype", "emit the prototype tree for an order");
  proto_cmd->add_option("--n", n_proto, "tree order")->required();
  proto_cmd->add_option("--dot", dot_path, "write expansion as DOT");
  proto_cmd->add_option("--edges", edges_path, "write expansion as edge list");

  auto* bench_cmd =
      app.add_subcommand("bench", "time the counting pass on a random tree");
  bench_cmd->add_option("--n", n_bench, "tree order")
      ->check(CLI::Range(1, 50000000));
  bench_cmd->add_option("--mode", mode, "float or exact")
      ->check(CLI::IsMember({"float", "exact"}));
  bench_cmd->add_option("--seed", seed_flag,
                        "RNG seed (default: LAPDIST_SEED or 1)");

  auto* enum_cmd = app.add_subcommand(
      "enumerate", "enumerate free trees of an order with sigma histogram");
  enum_cmd->add_option("--n", n_enum, "tree order")->check(CLI::Range(1, 20));
  enum_cmd->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::Range(1, 256));
  enum_cmd->add_flag("--print", print_codes, "print each canonical code");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (sigma_cmd->parsed()) return cmd_sigma(file, use_float);
    if (count_cmd->parsed())
      return cmd_count(file, lo, hi, lo_open, hi_open, use_float);
    if (verify_cmd->parsed()) return cmd_verify(max_n, jobs, pipeline, from_n);
    if (transform_cmd->parsed()) {
      if (!replay_path.empty()) return cmd_replay(replay_path);
      if (file.empty())
        throw CLI::ValidationError("transform needs a file or --replay");
      return cmd_transform(file, trace_path, dot_path, no_verify);
    }
    if (proto_cmd->parsed())
      return cmd_prototype(n_proto, dot_path, edges_path);
    if (bench_cmd->parsed()) return cmd_bench(n_bench, mode, seed_flag);
    if (enum_cmd->parsed()) return cmd_enumerate(n_enum, jobs, print_codes);
  } catch (const lapdist::PropernessError& e) {
    std::cerr << "properness violation: " << e.what() << std::endl;
    for (const auto& s : e.steps)
      std::cerr << "  step " << s.index << " " << lapdist::to_string(s.kind)
                << " @u" << s.vertex << ": " << s.before << " -> " << s.after
                << " (sigma " << s.sigma_before << " -> " << s.sigma_after
                << ")" << std::endl;
    return kExitViolation;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  }
  return kExitUsage;
}
