#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eigloc {

// Total function [k] -> [k]. Stored as sorted non-identity (from, to) pairs;
// unlisted labels map to themselves.
class LabelMap {
public:
  LabelMap() = default;

  static LabelMap identity() { return {}; }

  template <class F>
  static LabelMap from_fn(int k, F f) {
    LabelMap m;
    for (int l = 1; l <= k; ++l) m.set(l, f(l));
    return m;
  }

  void set(int from, int to) {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair<int, int>{from, 0},
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != pairs_.end() && it->first == from) {
      if (from == to)
        pairs_.erase(it);
      else
        it->second = to;
      return;
    }
    if (from != to) pairs_.insert(it, {from, to});
  }

  int operator()(int l) const {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair<int, int>{l, 0},
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    return (it != pairs_.end() && it->first == l) ? it->second : l;
  }

  bool is_identity() const { return pairs_.empty(); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  bool operator==(const LabelMap&) const = default;

private:
  std::vector<std::pair<int, int>> pairs_;
};

// Binary relation on [k] x [k]; sorted, duplicates collapse.
class JoinRelation {
public:
  JoinRelation() = default;
  JoinRelation(std::initializer_list<std::pair<int, int>> ps) {
    for (const auto& p : ps) insert(p.first, p.second);
  }

  void insert(int i, int j) {
    const std::pair<int, int> p{i, j};
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
    if (it == pairs_.end() || *it != p) pairs_.insert(it, p);
  }

  void merge(const JoinRelation& o) {
    for (const auto& p : o.pairs_) insert(p.first, p.second);
  }

  bool contains(int i, int j) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), std::pair<int, int>{i, j});
  }

  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  bool operator==(const JoinRelation&) const = default;

private:
  std::vector<std::pair<int, int>> pairs_;
};

// Slick k-expression: atoms i(v) and binary joins combining union,
// cross-edge creation (S) and relabeling (L left / R right) in one operator.
// Nodes live in an arena; children are referenced by index. Vertex names are
// interned in leaf (left-to-right) order, so vertex id == leaf rank.
struct SlickExpr {
  struct Node {
    int label = 0;   // atoms only
    int vertex = -1; // atoms only: index into vertex_names
    JoinRelation S;  // joins only
    LabelMap L, R;
    int left = -1, right = -1;
    bool is_atom() const { return left < 0; }
  };

  int width = 1;
  std::vector<Node> nodes;
  std::vector<std::string> vertex_names;
  int root = -1;

  int n_vertices() const { return static_cast<int>(vertex_names.size()); }
  int n_nodes() const { return static_cast<int>(nodes.size()); }

  int add_atom(int label, std::string name) {
    Node n;
    n.label = label;
    n.vertex = static_cast<int>(vertex_names.size());
    vertex_names.push_back(std::move(name));
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  int add_join(JoinRelation S, LabelMap L, LabelMap R, int left, int right) {
    Node n;
    n.S = std::move(S);
    n.L = std::move(L);
    n.R = std::move(R);
    n.left = left;
    n.right = right;
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  // Appends a copy of `o`'s tree; returns the id of the copied root.
  // Vertex names must stay globally unique; callers are responsible.
  int absorb(const SlickExpr& o) {
    const int node_off = n_nodes();
    const int vert_off = n_vertices();
    vertex_names.insert(vertex_names.end(), o.vertex_names.begin(), o.vertex_names.end());
    for (Node n : o.nodes) {
      if (n.is_atom())
        n.vertex += vert_off;
      else {
        n.left += node_off;
        n.right += node_off;
      }
      nodes.push_back(std::move(n));
    }
    return o.root + node_off;
  }

  // Standalone copy of the subtree rooted at `node`, with vertices
  // re-interned in the subtree's own leaf order.
  SlickExpr subtree(int node) const;
};

inline SlickExpr SlickExpr::subtree(int node) const {
  SlickExpr out;
  out.width = width;
  std::vector<std::pair<int, bool>> stack{{node, false}};
  std::vector<int> built; // ids in out, post-order
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const Node& n = nodes[id];
    if (n.is_atom()) {
      built.push_back(out.add_atom(n.label, vertex_names[n.vertex]));
    } else if (!expanded) {
      stack.push_back({id, true});
      stack.push_back({n.right, false});
      stack.push_back({n.left, false});
    } else {
      const int r = built.back();
      built.pop_back();
      const int l = built.back();
      built.pop_back();
      built.push_back(out.add_join(n.S, n.L, n.R, l, r));
    }
  }
  out.root = built.back();
  return out;
}

// Classic clique-width k-expression with the four operators
// i(v), union, eta_{i,j} (edge creation) and rho_{i,j} (relabeling).
struct ClassicExpr {
  enum class Kind { Atom, Union, Eta, Rho };

  struct Node {
    Kind kind = Kind::Atom;
    int label = 0;   // atom
    int vertex = -1; // atom
    int i = 0, j = 0;      // eta/rho
    int left = -1, right = -1; // union: both; eta/rho: left = child
    bool is_atom() const { return kind == Kind::Atom; }
  };

  int width = 1;
  std::vector<Node> nodes;
  std::vector<std::string> vertex_names;
  int root = -1;

  int n_vertices() const { return static_cast<int>(vertex_names.size()); }
  int n_nodes() const { return static_cast<int>(nodes.size()); }

  int add_atom(int label, std::string name) {
    Node n;
    n.kind = Kind::Atom;
    n.label = label;
    n.vertex = static_cast<int>(vertex_names.size());
    vertex_names.push_back(std::move(name));
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  int add_union(int left, int right) {
    Node n;
    n.kind = Kind::Union;
    n.left = left;
    n.right = right;
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  int add_eta(int i, int j, int child) {
    if (i == j) throw std::invalid_argument("eta requires distinct labels");
    Node n;
    n.kind = Kind::Eta;
    n.i = i;
    n.j = j;
    n.left = child;
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  int add_rho(int i, int j, int child) {
    Node n;
    n.kind = Kind::Rho;
    n.i = i;
    n.j = j;
    n.left = child;
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  int absorb(const ClassicExpr& o) {
    const int node_off = n_nodes();
    const int vert_off = n_vertices();
    vertex_names.insert(vertex_names.end(), o.vertex_names.begin(), o.vertex_names.end());
    for (Node n : o.nodes) {
      if (n.is_atom()) {
        n.vertex += vert_off;
      } else {
        n.left += node_off;
        if (n.kind == Kind::Union) n.right += node_off;
      }
      nodes.push_back(std::move(n));
    }
    return o.root + node_off;
  }
};

namespace detail {

template <class Expr, class ChildrenFn>
int tree_depth(const Expr& e, ChildrenFn children) {
  std::vector<int> depth(e.nodes.size(), -1);
  std::vector<std::pair<int, bool>> stack{{e.root, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const auto kids = children(e.nodes[id]);
    if (kids.empty()) {
      depth[id] = 0;
    } else if (!expanded) {
      stack.push_back({id, true});
      for (int c : kids) stack.push_back({c, false});
    } else {
      int d = 0;
      for (int c : kids) d = std::max(d, depth[c]);
      depth[id] = d + 1;
    }
  }
  return depth[e.root];
}

}  // namespace detail

// Depth of the parse tree: atoms have depth 0, joins 1 + max of children.
inline int depth(const SlickExpr& e) {
  return detail::tree_depth(e, [](const SlickExpr::Node& n) {
    return n.is_atom() ? std::vector<int>{} : std::vector<int>{n.left, n.right};
  });
}

// Classic depth: unary eta/rho nodes also add one level.
inline int depth(const ClassicExpr& e) {
  return detail::tree_depth(e, [](const ClassicExpr::Node& n) {
    switch (n.kind) {
      case ClassicExpr::Kind::Atom: return std::vector<int>{};
      case ClassicExpr::Kind::Union: return std::vector<int>{n.left, n.right};
      default: return std::vector<int>{n.left};
    }
  });
}

namespace detail {

template <class Expr>
void check_vertex_names(const Expr& e) {
  std::set<std::string> seen;
  for (const auto& name : e.vertex_names) {
    if (name.empty()) throw std::invalid_argument("empty vertex name");
    if (!seen.insert(name).second) throw std::invalid_argument("duplicate vertex name: " + name);
  }
}

inline void check_label(int l, int k, const char* what) {
  if (l < 1 || l > k)
    throw std::invalid_argument(std::string(what) + " label " + std::to_string(l) + " out of range [1," +
                                std::to_string(k) + "]");
}

}  // namespace detail

// Structural validation: label ranges, unique vertex names, and that the
// arena forms a tree with exactly 2n-1 reachable nodes.
inline void validate(const SlickExpr& e) {
  if (e.width < 1) throw std::invalid_argument("width must be >= 1");
  if (e.root < 0 || e.root >= e.n_nodes()) throw std::invalid_argument("bad root");
  detail::check_vertex_names(e);
  std::vector<char> seen(e.nodes.size(), 0);
  std::vector<int> stack{e.root};
  int atoms = 0, visited = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (id < 0 || id >= e.n_nodes()) throw std::invalid_argument("child index out of range");
    if (seen[id]) throw std::invalid_argument("node shared between branches (not a tree)");
    seen[id] = 1;
    ++visited;
    const auto& n = e.nodes[id];
    if (n.is_atom()) {
      detail::check_label(n.label, e.width, "atom");
      ++atoms;
    } else {
      for (const auto& [i, j] : n.S.pairs()) {
        detail::check_label(i, e.width, "S");
        detail::check_label(j, e.width, "S");
      }
      for (const auto* m : {&n.L, &n.R})
        for (const auto& [from, to] : m->pairs()) {
          detail::check_label(from, e.width, "map");
          detail::check_label(to, e.width, "map");
        }
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  if (visited != e.n_nodes() || e.n_nodes() != 2 * atoms - 1)
    throw std::invalid_argument("arena is not a single tree with 2n-1 nodes");
  if (atoms != e.n_vertices()) throw std::invalid_argument("vertex table does not match atoms");
}

inline void validate(const ClassicExpr& e) {
  if (e.width < 1) throw std::invalid_argument("width must be >= 1");
  if (e.root < 0 || e.root >= e.n_nodes()) throw std::invalid_argument("bad root");
  detail::check_vertex_names(e);
  std::vector<char> seen(e.nodes.size(), 0);
  std::vector<int> stack{e.root};
  int visited = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (id < 0 || id >= e.n_nodes()) throw std::invalid_argument("child index out of range");
    if (seen[id]) throw std::invalid_argument("node shared between branches (not a tree)");
    seen[id] = 1;
    ++visited;
    const auto& n = e.nodes[id];
    switch (n.kind) {
      case ClassicExpr::Kind::Atom:
        detail::check_label(n.label, e.width, "atom");
        break;
      case ClassicExpr::Kind::Union:
        stack.push_back(n.left);
        stack.push_back(n.right);
        break;
      case ClassicExpr::Kind::Eta:
        if (n.i == n.j) throw std::invalid_argument("eta requires distinct labels");
        [[fallthrough]];
      case ClassicExpr::Kind::Rho:
        detail::check_label(n.i, e.width, "op");
        detail::check_label(n.j, e.width, "op");
        stack.push_back(n.left);
        break;
    }
  }
  if (visited != e.n_nodes()) throw std::invalid_argument("arena contains unreachable nodes");
}

// Node-for-node structural equality (used by round-trip tests).
inline bool exprs_equal(const SlickExpr& a, const SlickExpr& b) {
  if (a.width != b.width) return false;
  std::vector<std::pair<int, int>> stack{{a.root, b.root}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const auto& nx = a.nodes[x];
    const auto& ny = b.nodes[y];
    if (nx.is_atom() != ny.is_atom()) return false;
    if (nx.is_atom()) {
      if (nx.label != ny.label || a.vertex_names[nx.vertex] != b.vertex_names[ny.vertex]) return false;
    } else {
      if (!(nx.S == ny.S) || !(nx.L == ny.L) || !(nx.R == ny.R)) return false;
      stack.push_back({nx.left, ny.left});
      stack.push_back({nx.right, ny.right});
    }
  }
  return true;
}

inline bool exprs_equal(const ClassicExpr& a, const ClassicExpr& b) {
  if (a.width != b.width) return false;
  std::vector<std::pair<int, int>> stack{{a.root, b.root}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const auto& nx = a.nodes[x];
    const auto& ny = b.nodes[y];
    if (nx.kind != ny.kind) return false;
    switch (nx.kind) {
      case ClassicExpr::Kind::Atom:
        if (nx.label != ny.label || a.vertex_names[nx.vertex] != b.vertex_names[ny.vertex]) return false;
        break;
      case ClassicExpr::Kind::Union:
        stack.push_back({nx.left, ny.left});
        stack.push_back({nx.right, ny.right});
        break;
      default:
        if (nx.i != ny.i || nx.j != ny.j) return false;
        stack.push_back({nx.left, ny.left});
        break;
    }
  }
  return true;
}

}  // namespace eigloc
