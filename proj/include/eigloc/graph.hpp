#pragma once

#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eigloc {

// Vertex-labeled simple graph produced by evaluating an expression.
// Vertices are kept in leaf (creation) order; `vertex_ids` are the ids from
// the originating expression, `names` the user-visible identifiers. Edges
// are unordered pairs of local positions.
struct LabeledGraph {
  std::vector<int> vertex_ids;
  std::vector<std::string> names;
  std::vector<int> labels;
  std::set<std::pair<int, int>> edges;

  int order() const { return static_cast<int>(names.size()); }

  int add_vertex(int vertex_id, std::string name, int label) {
    vertex_ids.push_back(vertex_id);
    names.push_back(std::move(name));
    labels.push_back(label);
    return order() - 1;
  }

  void add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loop");
    edges.insert(u < v ? std::pair{u, v} : std::pair{v, u});
  }

  bool has_edge(int u, int v) const {
    return edges.count(u < v ? std::pair{u, v} : std::pair{v, u}) != 0;
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(order(), 0);
    for (const auto& [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }

  int components() const {
    std::vector<int> parent(order());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int comps = order();
    for (const auto& [u, v] : edges) {
      const int ru = find(u), rv = find(v);
      if (ru != rv) {
        parent[ru] = rv;
        --comps;
      }
    }
    return comps;
  }
};

// Identity-level comparison: same named vertices with the same labels and
// the same edges. No isomorphism search.
inline bool graphs_equal(const LabeledGraph& a, const LabeledGraph& b) {
  if (a.order() != b.order() || a.edges.size() != b.edges.size()) return false;
  std::map<std::string, int> la, lb;
  for (int i = 0; i < a.order(); ++i) la[a.names[i]] = a.labels[i];
  for (int i = 0; i < b.order(); ++i) lb[b.names[i]] = b.labels[i];
  if (la != lb) return false;
  auto edge_names = [](const LabeledGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [u, v] : g.edges) {
      const auto& nu = g.names[u];
      const auto& nv = g.names[v];
      out.insert(nu < nv ? std::pair{nu, nv} : std::pair{nv, nu});
    }
    return out;
  };
  return edge_names(a) == edge_names(b);
}

}  // namespace eigloc
