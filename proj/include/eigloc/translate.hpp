#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eigloc/expr.hpp"

namespace eigloc {

namespace detail {

// Applies a batch of eta_{i,j} rewrites to the subtree at `node`, copying it
// into `out`. At a join with maps L and R, each pending pair (i, j) splits
// into cross-component S pairs (added to this join's relation) and
// within-component pairs pushed down to the child whose map produces the
// matching labels. Batching the pairs as a set keeps every node visited
// once; set-union semantics make the batch equal to the sequential
// composition of the individual rewrites.
inline int eta_rewrite(const SlickExpr& src, int node, const std::vector<std::pair<int, int>>& pending,
                       SlickExpr& out) {
  const SlickExpr::Node& n = src.nodes[node];
  if (n.is_atom()) {
    // a single vertex admits no new edge
    SlickExpr::Node copy = n;
    out.nodes.push_back(std::move(copy));
    return out.n_nodes() - 1;
  }
  JoinRelation s = n.S;
  std::vector<std::pair<int, int>> down_left, down_right;
  const int k = src.width;
  for (const auto& [i, j] : pending) {
    for (int a = 1; a <= k; ++a) {
      const int la = n.L(a), ra = n.R(a);
      for (int b = 1; b <= k; ++b) {
        const int rb = n.R(b), lb = n.L(b);
        if (la == i && rb == j) s.insert(a, b);
        if (la == j && rb == i) s.insert(a, b);
        if (la == i && lb == j) down_left.push_back({a, b});
        if (ra == i && rb == j) down_right.push_back({a, b});
      }
    }
  }
  auto dedup = [](std::vector<std::pair<int, int>>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(down_left);
  dedup(down_right);
  const int left = eta_rewrite(src, n.left, down_left, out);
  const int right = eta_rewrite(src, n.right, down_right, out);
  return out.add_join(std::move(s), n.L, n.R, left, right);
}

}  // namespace detail

// eta_{i,j} applied to a slick expression, as an equal-depth slick
// expression over the same vertices.
inline SlickExpr eta_to_slick(int i, int j, const SlickExpr& s) {
  if (i == j) throw std::invalid_argument("eta_to_slick: labels must be distinct");
  if (i < 1 || i > s.width || j < 1 || j > s.width)
    throw std::invalid_argument("eta_to_slick: label out of range");
  SlickExpr out;
  out.width = s.width;
  out.vertex_names = s.vertex_names;
  out.root = detail::eta_rewrite(s, s.root, {{i, j}}, out);
  return out;
}

// Classic k-expression -> equivalent slick k-expression (same labeled
// graph). rho folds into the join's label maps, union becomes an empty
// join, eta goes through eta_to_slick.
inline SlickExpr classic_to_slick(const ClassicExpr& r, int start = -1) {
  const ClassicExpr::Node& n = r.nodes[start < 0 ? r.root : start];
  switch (n.kind) {
    case ClassicExpr::Kind::Atom: {
      SlickExpr out;
      out.width = r.width;
      out.root = out.add_atom(n.label, r.vertex_names[n.vertex]);
      return out;
    }
    case ClassicExpr::Kind::Union: {
      SlickExpr out = classic_to_slick(r, n.left);
      const int right = out.absorb(classic_to_slick(r, n.right));
      const int left = out.root;
      out.root = out.add_join(JoinRelation{}, LabelMap::identity(), LabelMap::identity(), left, right);
      return out;
    }
    case ClassicExpr::Kind::Rho: {
      SlickExpr out = classic_to_slick(r, n.left);
      SlickExpr::Node& root = out.nodes[out.root];
      if (root.is_atom()) {
        if (root.label == n.i) root.label = n.j;
      } else {
        auto rewrite = [&](const LabelMap& m) {
          return LabelMap::from_fn(out.width, [&](int t) {
            const int v = m(t);
            return v == n.i ? n.j : v;
          });
        };
        root.L = rewrite(root.L);
        root.R = rewrite(root.R);
      }
      return out;
    }
    case ClassicExpr::Kind::Eta:
      return eta_to_slick(n.i, n.j, classic_to_slick(r, n.left));
  }
  throw std::logic_error("unreachable");
}

namespace detail {

inline int wrap_rho(ClassicExpr& e, int i, int j, int child) {
  return i == j ? child : e.add_rho(i, j, child);
}

}  // namespace detail

// Slick k-expression -> equivalent classic 2k-expression. Left labels are
// shifted to [k+1, 2k], the components are united, each (i, j) in S becomes
// eta_{i+k, j}, and the combined relabeling f (L on the shifted left, R on
// the right) is realized in three rounds of rho operations so that no
// rename clobbers an earlier one. Identity renames are dropped.
inline ClassicExpr slick_to_classic(const SlickExpr& s, int start = -1) {
  const int k = s.width;
  const SlickExpr::Node& n = s.nodes[start < 0 ? s.root : start];
  if (n.is_atom()) {
    ClassicExpr out;
    out.width = 2 * k;
    out.root = out.add_atom(n.label, s.vertex_names[n.vertex]);
    return out;
  }

  ClassicExpr out = slick_to_classic(s, n.left);
  // shift every left label i to i+k (innermost rename first)
  for (int i = k; i >= 1; --i) out.root = out.add_rho(i, i + k, out.root);
  const int right = out.absorb(slick_to_classic(s, n.right));
  out.root = out.add_union(out.root, right);
  for (const auto& [i, j] : n.S.pairs()) out.root = out.add_eta(i + k, j, out.root);

  // f: combined target labels over [2k]
  std::vector<int> f(2 * k + 1);
  for (int i = 1; i <= 2 * k; ++i) f[i] = i > k ? n.L(i - k) : n.R(i);

  // round 1: collapse each f-class onto its largest member
  std::vector<int> g(2 * k + 1);
  for (int i = 1; i <= 2 * k; ++i) {
    g[i] = i;
    for (int j = 1; j <= 2 * k; ++j)
      if (f[j] == f[i]) g[i] = std::max(g[i], j);
  }
  for (int i = 2 * k; i >= 1; --i) out.root = detail::wrap_rho(out, i, g[i], out.root);

  // round 2: pack the q surviving labels into [2k-q+1, 2k]
  std::vector<int> survivors;
  for (int i = 1; i <= 2 * k; ++i)
    if (g[i] == i) survivors.push_back(i);
  const int q = static_cast<int>(survivors.size());
  for (int idx = q - 1; idx >= 0; --idx)
    out.root = detail::wrap_rho(out, survivors[idx], 2 * k - q + idx + 1, out.root);

  // round 3: send each packed slot to its final label in [k]
  for (int idx = q - 1; idx >= 0; --idx)
    out.root = detail::wrap_rho(out, 2 * k - q + idx + 1, f[survivors[idx]], out.root);

  return out;
}

}  // namespace eigloc
