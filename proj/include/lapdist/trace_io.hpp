// Trace serialization (one JSON object per line: initial tree, each step,
// final representation) and Graphviz DOT rendering of trees, with sun
// centers drawn as boxes.
#pragma once

#include "lapdist/gpp.hpp"
#include "lapdist/transform.hpp"
#include "lapdist/tree.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lapdist {

inline std::string trace_to_jsonl(const Trace& trace) {
  using nlohmann::json;
  std::string out;
  {
    json j;
    j["type"] = "initial";
    j["n"] = trace.initial.n();
    json edges = json::array();
    for (const auto& [u, v] : trace.initial.edges())
      edges.push_back(json::array({u, v}));
    j["edges"] = std::move(edges);
    out += j.dump();
    out += '\n';
  }
  for (const TransformStep& s : trace.steps) {
    json j;
    j["type"] = "step";
    j["step_index"] = s.index;
    j["kind"] = to_string(s.kind);
    j["vertex"] = s.vertex;
    j["before"] = s.before;
    j["after"] = s.after;
    j["sigma_before"] = s.sigma_before;
    j["sigma_after"] = s.sigma_after;
    out += j.dump();
    out += '\n';
  }
  {
    json j;
    j["type"] = "final";
    j["n_total"] = trace.final.n_total;
    j["skeleton_n"] = trace.final.skeleton.n();
    json edges = json::array();
    for (const auto& [u, v] : trace.final.skeleton.edges())
      edges.push_back(json::array({u, v}));
    j["skeleton_edges"] = std::move(edges);
    json pend = json::array();
    for (const auto& lst : trace.final.pendants) {
      json l = json::array();
      for (const Gpp& g : lst) l.push_back(json::array({g.q, g.r}));
      pend.push_back(std::move(l));
    }
    j["pendants"] = std::move(pend);
    j["rendered"] = render(trace.final);
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline Trace trace_from_jsonl(std::istream& in) {
  using nlohmann::json;
  std::optional<Tree> initial;
  std::vector<TransformStep> steps;
  std::optional<GppTree> final_rep;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "initial") {
        const int n = j.at("n").get<int>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("edges"))
          edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        initial = Tree(n, edges);
      } else if (type == "step") {
        TransformStep s;
        s.index = j.at("step_index").get<int>();
        const auto kind = step_kind_from_string(j.at("kind").get<std::string>());
        if (!kind) throw std::runtime_error("unknown step kind");
        s.kind = *kind;
        s.vertex = j.at("vertex").get<int>();
        s.before = j.at("before").get<std::string>();
        s.after = j.at("after").get<std::string>();
        s.sigma_before = j.at("sigma_before").get<int>();
        s.sigma_after = j.at("sigma_after").get<int>();
        steps.push_back(std::move(s));
      } else if (type == "final") {
        const int n_total = j.at("n_total").get<int>();
        const int k = j.at("skeleton_n").get<int>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("skeleton_edges"))
          edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        std::vector<std::vector<Gpp>> pendants;
        for (const auto& lst : j.at("pendants")) {
          std::vector<Gpp> gl;
          for (const auto& g : lst)
            gl.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
          pendants.push_back(std::move(gl));
        }
        GppTree rep(Tree(k, edges), std::move(pendants), n_total);
        rep.check();
        final_rep = std::move(rep);
      } else {
        throw std::runtime_error("unknown record type '" + type + "'");
      }
    } catch (const std::exception& ex) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " +
                               ex.what());
    }
  }
  if (!initial) throw std::runtime_error("trace has no initial record");
  if (!final_rep) throw std::runtime_error("trace has no final record");
  return Trace{std::move(*initial), std::move(steps), std::move(*final_rep)};
}

inline Trace trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return trace_from_jsonl(in);
}

// Graphviz rendering; vertices listed in `boxed` get shape=box.
inline std::string to_dot(const Tree& t, std::vector<int> boxed = {}) {
  std::sort(boxed.begin(), boxed.end());
  boxed.erase(std::unique(boxed.begin(), boxed.end()), boxed.end());
  std::string out = "graph tree {\n  node [shape=circle];\n";
  for (int v : boxed) out += "  " + std::to_string(v) + " [shape=box];\n";
  for (int v = 0; v < t.n(); ++v)
    if (t.degree(v) == 0) out += "  " + std::to_string(v) + ";\n";
  for (const auto& [u, v] : t.edges())
    out += "  " + std::to_string(u) + " -- " + std::to_string(v) + ";\n";
  out += "}\n";
  return out;
}

// Expanded representation with every sun center boxed.
inline std::string to_dot(const GppTree& rep) {
  return to_dot(expand(rep), sun_centers(rep));
}

}  // namespace lapdist
