#pragma once

#include <utility>
#include <vector>

#include "eigloc/expr.hpp"
#include "eigloc/graph.hpp"

namespace eigloc {

namespace detail {

// Per-subexpression label classes as intrusive singly-linked lists over the
// local vertex array, so merging under a label map is O(k) splices.
struct LabelClasses {
  std::vector<int> head, tail; // index 1..k; -1 = empty

  explicit LabelClasses(int k) : head(k + 1, -1), tail(k + 1, -1) {}

  void append(int label, const LabelClasses& src, int src_label, std::vector<int>& next) {
    const int h = src.head[src_label];
    if (h < 0) return;
    if (head[label] < 0) {
      head[label] = h;
      tail[label] = src.tail[src_label];
    } else {
      next[tail[label]] = h;
      tail[label] = src.tail[src_label];
    }
  }
};

}  // namespace detail

// Evaluates the subtree rooted at `start` (default: the whole expression)
// to its labeled graph. Cross edges are created from the S relation before
// L and R rewrite the labels.
inline LabeledGraph eval_slick(const SlickExpr& e, int start = -1) {
  const int k = e.width;
  LabeledGraph g;
  std::vector<int> next; // linked-list successor per local vertex
  std::vector<detail::LabelClasses> st;

  std::vector<std::pair<int, bool>> stack{{start < 0 ? e.root : start, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const auto& n = e.nodes[id];
    if (n.is_atom()) {
      const int local = g.add_vertex(n.vertex, e.vertex_names[n.vertex], n.label);
      next.push_back(-1);
      detail::LabelClasses c(k);
      c.head[n.label] = c.tail[n.label] = local;
      st.push_back(std::move(c));
    } else if (!expanded) {
      stack.push_back({id, true});
      stack.push_back({n.right, false});
      stack.push_back({n.left, false});
    } else {
      detail::LabelClasses right = std::move(st.back());
      st.pop_back();
      detail::LabelClasses left = std::move(st.back());
      st.pop_back();
      for (const auto& [i, j] : n.S.pairs())
        for (int u = left.head[i]; u >= 0; u = next[u])
          for (int v = right.head[j]; v >= 0; v = next[v]) g.add_edge(u, v);
      detail::LabelClasses merged(k);
      for (int l = 1; l <= k; ++l) merged.append(n.L(l), left, l, next);
      for (int l = 1; l <= k; ++l) merged.append(n.R(l), right, l, next);
      st.push_back(std::move(merged));
    }
  }

  const detail::LabelClasses& root = st.back();
  for (int l = 1; l <= k; ++l)
    for (int u = root.head[l]; u >= 0; u = next[u]) g.labels[u] = l;
  return g;
}

// Classic evaluation: union is disjoint, eta_{i,j} adds the missing edges
// between label classes i and j, rho_{i,j} renames labels only.
inline LabeledGraph eval_classic(const ClassicExpr& e, int start = -1) {
  const int k = e.width;
  LabeledGraph g;
  std::vector<int> next;
  std::vector<detail::LabelClasses> st;

  std::vector<std::pair<int, bool>> stack{{start < 0 ? e.root : start, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const auto& n = e.nodes[id];
    switch (n.kind) {
      case ClassicExpr::Kind::Atom: {
        const int local = g.add_vertex(n.vertex, e.vertex_names[n.vertex], n.label);
        next.push_back(-1);
        detail::LabelClasses c(k);
        c.head[n.label] = c.tail[n.label] = local;
        st.push_back(std::move(c));
        break;
      }
      case ClassicExpr::Kind::Union:
        if (!expanded) {
          stack.push_back({id, true});
          stack.push_back({n.right, false});
          stack.push_back({n.left, false});
        } else {
          detail::LabelClasses right = std::move(st.back());
          st.pop_back();
          detail::LabelClasses& left = st.back();
          for (int l = 1; l <= k; ++l) left.append(l, right, l, next);
        }
        break;
      case ClassicExpr::Kind::Eta:
        if (!expanded) {
          stack.push_back({id, true});
          stack.push_back({n.left, false});
        } else {
          detail::LabelClasses& c = st.back();
          for (int u = c.head[n.i]; u >= 0; u = next[u])
            for (int v = c.head[n.j]; v >= 0; v = next[v]) g.add_edge(u, v);
        }
        break;
      case ClassicExpr::Kind::Rho:
        if (!expanded) {
          stack.push_back({id, true});
          stack.push_back({n.left, false});
        } else if (n.i != n.j) {
          detail::LabelClasses& c = st.back();
          detail::LabelClasses tmp(k);
          tmp.head[n.i] = c.head[n.i];
          tmp.tail[n.i] = c.tail[n.i];
          c.head[n.i] = c.tail[n.i] = -1;
          c.append(n.j, tmp, n.i, next);
        }
        break;
    }
  }

  const detail::LabelClasses& root = st.back();
  for (int l = 1; l <= k; ++l)
    for (int u = root.head[l]; u >= 0; u = next[u]) g.labels[u] = l;
  return g;
}

}  // namespace eigloc
