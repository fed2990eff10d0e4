#pragma once

#include <cassert>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eigloc/expr.hpp"
#include "eigloc/graph.hpp"
#include "eigloc/rational.hpp"

namespace eigloc {

// Thrown when a box violates its structural invariants; carries the
// post-order id of the parse-tree node being processed.
class InvariantViolation : public std::runtime_error {
public:
  InvariantViolation(int node, const std::string& msg)
      : std::runtime_error("invariant violation at node " + std::to_string(node) + ": " + msg), node(node) {}
  int node;
};

// The matrix being diagonalized: every nonzero off-diagonal entry equals
// `off_diag`, diagonal entries come from a per-vertex table. The adjacency
// matrix is w = 1 with a zero diagonal; the Laplacian is w = -1 with vertex
// degrees on the diagonal.
struct MatrixSpec {
  Rational off_diag{1};
  std::vector<Rational> diagonal; // indexed by expression vertex id; missing = 0

  Rational diag_of(int vertex) const {
    return vertex < static_cast<int>(diagonal.size()) ? diagonal[vertex] : Rational(0);
  }

  static MatrixSpec adjacency() { return {}; }

  static MatrixSpec laplacian(const LabeledGraph& g) { return degree_diagonal(g, Rational(-1)); }

  static MatrixSpec signless_laplacian(const LabeledGraph& g) { return degree_diagonal(g, Rational(1)); }

private:
  static MatrixSpec degree_diagonal(const LabeledGraph& g, Rational w) {
    MatrixSpec spec;
    spec.off_diag = std::move(w);
    const std::vector<int> deg = g.degrees();
    int max_id = -1;
    for (int id : g.vertex_ids) max_id = std::max(max_id, id);
    spec.diagonal.assign(max_id + 1, Rational(0));
    for (int i = 0; i < g.order(); ++i) spec.diagonal[g.vertex_ids[i]] = Rational(deg[i]);
    return spec;
  }
};

// Small dense symmetric matrix with congruence primitives. Row and column
// operations always come in matching pairs, so the stored grid stays
// exactly symmetric.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(int m) : m_(m), a_(static_cast<std::size_t>(m) * m) {}

  int order() const { return m_; }

  Rational& at(int i, int j) { return a_[static_cast<std::size_t>(i) * m_ + j]; }
  const Rational& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * m_ + j]; }

  bool symmetric() const {
    for (int i = 0; i < m_; ++i)
      for (int j = i + 1; j < m_; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }

  // R_dst += f*R_src followed by C_dst += f*C_src. Zero source entries are
  // skipped; they contribute nothing.
  void congruence_axpy(int dst, int src, const Rational& f) {
    assert(dst != src);
    for (int l = 0; l < m_; ++l) {
      const Rational& s = at(src, l);
      if (!s.is_zero()) at(dst, l) += f * s;
    }
    for (int l = 0; l < m_; ++l) {
      const Rational& s = at(l, src);
      if (!s.is_zero()) at(l, dst) += f * s;
    }
  }

  void swap_rc(int i, int j) {
    if (i == j) return;
    for (int l = 0; l < m_; ++l) std::swap(at(i, l), at(j, l));
    for (int l = 0; l < m_; ++l) std::swap(at(l, i), at(l, j));
  }

  void erase_rc(int i) {
    SymMatrix out(m_ - 1);
    for (int r = 0, ro = 0; r < m_; ++r) {
      if (r == i) continue;
      for (int c = 0, co = 0; c < m_; ++c) {
        if (c == i) continue;
        out.at(ro, co) = std::move(at(r, c));
        ++co;
      }
      ++ro;
    }
    *this = std::move(out);
  }

  // Reorders rows and columns so that new position p holds old row perm[p].
  void permute(const std::vector<int>& perm) {
    SymMatrix out(m_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) out.at(i, j) = std::move(at(perm[i], perm[j]));
    *this = std::move(out);
  }

private:
  int m_ = 0;
  std::vector<Rational> a_;
};

// Lifecycle of a matrix row: TypeII (still coupled to the rest of the
// graph through its label) -> TypeI (zero outside the box) -> diagonalized
// (emitted and removed). Never backwards.
enum class RowKind : unsigned char { TypeI, TypeII };

struct RowMeta {
  RowKind kind;
  int label;
  int vertex; // graph vertex owning this row
};

// The 4-tuple [k', k'', M, labels] transmitted up the parse tree. Rows are
// kept physically partitioned: the k' type-i rows first, then the k''
// type-ii rows, each block in stable (insertion) order.
struct KBox {
  SymMatrix m;
  std::vector<RowMeta> rows;

  int order() const { return static_cast<int>(rows.size()); }
  int kp() const {
    int c = 0;
    for (const auto& r : rows) c += r.kind == RowKind::TypeI;
    return c;
  }
  int kpp() const { return order() - kp(); }
};

struct DiagEntry {
  int vertex; // vertex whose row produced this entry
  int node;   // post-order id of the parse-tree node that emitted it
  Rational value;
};

using DiagList = std::vector<DiagEntry>;

inline void validate_box(const KBox& b, int k, int node) {
  const int kp = b.kp(), kpp = b.kpp();
  if (!(0 <= kp && kp <= kpp && kpp <= k))
    throw InvariantViolation(node, "box shape k'=" + std::to_string(kp) + " k''=" + std::to_string(kpp) +
                                       " violates 0 <= k' <= k'' <= " + std::to_string(k));
  for (int i = 0; i < kp; ++i)
    if (b.rows[i].kind != RowKind::TypeI) throw InvariantViolation(node, "type-i block is not a prefix");
  std::vector<char> seen(k + 1, 0);
  for (int i = kp; i < b.order(); ++i) {
    const auto& r = b.rows[i];
    if (r.kind != RowKind::TypeII) throw InvariantViolation(node, "type-ii block contains a type-i row");
    if (r.label < 1 || r.label > k) throw InvariantViolation(node, "row label out of range");
    if (seen[r.label]++) throw InvariantViolation(node, "duplicate type-ii label " + std::to_string(r.label));
  }
  if (!b.m.symmetric()) throw InvariantViolation(node, "box matrix is not symmetric");
}

// ---- CombineBoxes stages -------------------------------------------------

inline KBox leaf_box(int label, int vertex, const Rational& c, const MatrixSpec& spec) {
  KBox b;
  b.m = SymMatrix(1);
  b.m.at(0, 0) = spec.diag_of(vertex) - c;
  b.rows.push_back({RowKind::TypeII, label, vertex});
  return b;
}

// Disjoint union of the child boxes plus the block of `w` entries between
// type-ii rows matched by S, then the L/R relabeling. Rows are grouped
// type-i first, preserving left-before-right insertion order; no physical
// reordering is needed because both children arrive partitioned.
inline KBox merge_children(const KBox& lb, const KBox& rb, const JoinRelation& S, const LabelMap& L,
                           const LabelMap& R, const MatrixSpec& spec) {
  const int nl = lb.order(), nr = rb.order();
  const int kpl = lb.kp(), kpr = rb.kp();
  // new position of child rows: left type-i, right type-i, left type-ii, right type-ii
  auto lpos = [&](int i) { return i < kpl ? i : kpr + i; };
  auto rpos = [&](int i) { return i < kpr ? kpl + i : nl + i; };

  KBox b;
  b.m = SymMatrix(nl + nr);
  b.rows.resize(nl + nr);
  for (int i = 0; i < nl; ++i) {
    b.rows[lpos(i)] = lb.rows[i];
    for (int j = 0; j < nl; ++j) b.m.at(lpos(i), lpos(j)) = lb.m.at(i, j);
  }
  for (int i = 0; i < nr; ++i) {
    b.rows[rpos(i)] = rb.rows[i];
    for (int j = 0; j < nr; ++j) b.m.at(rpos(i), rpos(j)) = rb.m.at(i, j);
  }
  for (int i = kpl; i < nl; ++i)
    for (int j = kpr; j < nr; ++j)
      if (S.contains(lb.rows[i].label, rb.rows[j].label)) {
        b.m.at(lpos(i), rpos(j)) = spec.off_diag;
        b.m.at(rpos(j), lpos(i)) = spec.off_diag;
      }
  for (int i = 0; i < nl; ++i) b.rows[lpos(i)].label = L(lb.rows[i].label);
  for (int i = 0; i < nr; ++i) b.rows[rpos(i)].label = R(rb.rows[i].label);
  return b;
}

namespace detail {

inline void stable_regroup(KBox& b) {
  std::vector<int> perm;
  perm.reserve(b.rows.size());
  for (int i = 0; i < b.order(); ++i)
    if (b.rows[i].kind == RowKind::TypeI) perm.push_back(i);
  for (int i = 0; i < b.order(); ++i)
    if (b.rows[i].kind == RowKind::TypeII) perm.push_back(i);
  bool identity = true;
  for (int i = 0; i < b.order(); ++i) identity = identity && perm[i] == i;
  if (identity) return;
  b.m.permute(perm);
  std::vector<RowMeta> rows(b.rows.size());
  for (std::size_t i = 0; i < perm.size(); ++i) rows[i] = b.rows[perm[i]];
  b.rows = std::move(rows);
}

}  // namespace detail

// While two type-ii rows share a label, subtract the newest one from the
// older (their rows agree outside the box, so the difference has support
// only inside it), turning the older row into type-i. Labels are processed
// in ascending order; within a label, duplicates merge in row order into
// the highest-index survivor.
inline void reduce_duplicate_type_ii(KBox& b) {
  bool changed = false;
  std::vector<int> labels;
  for (const auto& r : b.rows)
    if (r.kind == RowKind::TypeII) labels.push_back(r.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const Rational minus_one(-1);
  for (int lbl : labels) {
    std::vector<int> idx;
    for (int i = 0; i < b.order(); ++i)
      if (b.rows[i].kind == RowKind::TypeII && b.rows[i].label == lbl) idx.push_back(i);
    if (idx.size() < 2) continue;
    const int survivor = idx.back();
    for (std::size_t t = 0; t + 1 < idx.size(); ++t) {
      b.m.congruence_axpy(idx[t], survivor, minus_one);
      assert(b.rows[idx[t]].kind == RowKind::TypeII);
      b.rows[idx[t]].kind = RowKind::TypeI;
      changed = true;
    }
  }
  if (changed) detail::stable_regroup(b);
}

namespace detail {

// Pivot elimination of row `pivot` against every other row of the box,
// then emit its diagonal entry and drop the row.
inline void eliminate_and_emit(KBox& b, int pivot, int node, DiagList& out) {
  const Rational d = b.m.at(pivot, pivot);
  for (int j = 0; j < b.order(); ++j) {
    if (j == pivot) continue;
    const Rational& mij = b.m.at(pivot, j);
    if (!mij.is_zero()) b.m.congruence_axpy(j, pivot, -(mij / d));
  }
  out.push_back({b.rows[pivot].vertex, node, d});
  b.m.erase_rc(pivot);
  b.rows.erase(b.rows.begin() + pivot);
}

// (0 a; a 0) -> (0 a; a a) -> (-a 0; 0 a): R_j += R_i/2, then R_i -= R_j
// (with the matching column operations).
inline void two_by_two_trick(KBox& b, int i, int j) {
  b.m.congruence_axpy(j, i, Rational(1, 2));
  b.m.congruence_axpy(i, j, Rational(-1));
}

}  // namespace detail

// Makes M0 (the type-i block) zero or empty. Rows with a nonzero diagonal
// are eliminated against the whole box and emitted (the emitted value is
// final: type-i rows are zero outside the box). When the M0 diagonal is all
// zero but an off-diagonal entry survives, the 2x2 trick creates two
// nonzero diagonals first. Runs to completion.
inline void annihilate_m0(KBox& b, int node, DiagList& out) {
  for (;;) {
    const int kp = b.kp();
    if (kp == 0) return;
    int pivot = -1;
    for (int i = 0; i < kp; ++i)
      if (!b.m.at(i, i).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot >= 0) {
      detail::eliminate_and_emit(b, pivot, node, out);
      continue;
    }
    bool found = false;
    for (int i = 0; i < kp && !found; ++i)
      for (int j = i + 1; j < kp && !found; ++j)
        if (!b.m.at(i, j).is_zero()) {
          detail::two_by_two_trick(b, i, j);
          found = true;
        }
    if (!found) return; // M0 is the zero matrix
  }
}

// Precondition: M0 is zero or empty. Brings M1 (the type-i x type-ii block)
// to row-echelon form with congruence operations among type-i rows; every
// zero row of M1 is then a zero row of the whole matrix and emits a 0.
// No-op unless k' > k''.
inline void reduce_kp(KBox& b, int node, DiagList& out) {
  const int kp = b.kp(), kpp = b.kpp();
  if (kp <= kpp) return;
  int prow = 0;
  for (int col = 0; col < kpp && prow < kp; ++col) {
    int r = -1;
    for (int i = prow; i < kp; ++i)
      if (!b.m.at(i, kp + col).is_zero()) {
        r = i;
        break;
      }
    if (r < 0) continue;
    if (r != prow) {
      b.m.swap_rc(r, prow);
      std::swap(b.rows[r], b.rows[prow]);
    }
    const Rational& piv = b.m.at(prow, kp + col);
    for (int i = prow + 1; i < kp; ++i) {
      const Rational& v = b.m.at(i, kp + col);
      if (!v.is_zero()) b.m.congruence_axpy(i, prow, -(v / piv));
    }
    ++prow;
  }
  for (int i = kp - 1; i >= prow; --i) {
    out.push_back({b.rows[i].vertex, node, Rational(0)});
    b.m.erase_rc(i);
    b.rows.erase(b.rows.begin() + i);
  }
  // restore emission order (rows were removed back to front)
  std::reverse(out.end() - (kp - prow), out.end());
}

// One parse-tree node: merge, deduplicate type-ii labels, then, only while
// k' > k'', clear M0 and strip the zero rows this leaves behind.
inline KBox combine_boxes(const KBox& lb, const KBox& rb, const JoinRelation& S, const LabelMap& L,
                          const LabelMap& R, const MatrixSpec& spec, int node, DiagList& out) {
  KBox b = merge_children(lb, rb, S, L, R, spec);
  reduce_duplicate_type_ii(b);
  if (b.kp() > b.kpp()) annihilate_m0(b, node, out);
  if (b.kp() > b.kpp()) reduce_kp(b, node, out);
  return b;
}

// Final stage at the root: plain symmetric congruence elimination of
// whatever is left. Pivot on the lowest nonzero diagonal; fall back to the
// 2x2 trick on the lexicographically smallest nonzero off-diagonal; an
// all-zero matrix emits zeros.
inline void diagonalize_box(KBox b, int node, DiagList& out) {
  while (b.order() > 0) {
    int pivot = -1;
    for (int i = 0; i < b.order(); ++i)
      if (!b.m.at(i, i).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot >= 0) {
      detail::eliminate_and_emit(b, pivot, node, out);
      continue;
    }
    bool found = false;
    for (int i = 0; i < b.order() && !found; ++i)
      for (int j = i + 1; j < b.order() && !found; ++j)
        if (!b.m.at(i, j).is_zero()) {
          detail::two_by_two_trick(b, i, j);
          found = true;
        }
    if (!found) {
      for (int i = 0; i < b.order(); ++i) out.push_back({b.rows[i].vertex, node, Rational(0)});
      return;
    }
  }
}

struct DiagOptions {
  bool validate = true;
  // Called after each node with its post-order id (1-based), the box it
  // transmits, and the entries it emitted. The root fires twice: once for
  // its combine step and once (with an empty box) for the final
  // DiagonalizeBox emissions.
  std::function<void(int node, const KBox& box, std::span<const DiagEntry> emitted)> observer;
};

// Post-order driver: leaves start boxes, joins combine them, and the root's
// box is fully diagonalized. Returns the n diagonal entries of a matrix
// congruent to M - cI, where M is given by `spec` over the graph of `e`.
inline DiagList diagonalize(const SlickExpr& e, const Rational& c, const MatrixSpec& spec,
                            const DiagOptions& opt = {}) {
  if (spec.off_diag.is_zero()) throw InvariantViolation(0, "matrix spec off-diagonal value must be nonzero");
  DiagList out;
  out.reserve(e.n_vertices());
  std::vector<KBox> boxes;
  std::vector<std::pair<int, bool>> stack{{e.root, false}};
  int t = 0;
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const auto& n = e.nodes[id];
    if (n.is_atom()) {
      ++t;
      KBox b = leaf_box(n.label, n.vertex, c, spec);
      if (opt.validate) validate_box(b, e.width, t);
      if (opt.observer) opt.observer(t, b, {});
      boxes.push_back(std::move(b));
    } else if (!expanded) {
      stack.push_back({id, true});
      stack.push_back({n.right, false});
      stack.push_back({n.left, false});
    } else {
      ++t;
      KBox rb = std::move(boxes.back());
      boxes.pop_back();
      KBox lb = std::move(boxes.back());
      boxes.pop_back();
      const std::size_t mark = out.size();
      KBox b = combine_boxes(lb, rb, n.S, n.L, n.R, spec, t, out);
      if (opt.validate) validate_box(b, e.width, t);
      if (opt.observer) opt.observer(t, b, {out.data() + mark, out.size() - mark});
      boxes.push_back(std::move(b));
    }
  }
  const std::size_t mark = out.size();
  diagonalize_box(std::move(boxes.back()), t, out);
  if (opt.observer) opt.observer(t, KBox{}, {out.data() + mark, out.size() - mark});
  if (opt.validate && static_cast<int>(out.size()) != e.n_vertices())
    throw InvariantViolation(t, "emitted " + std::to_string(out.size()) + " entries for " +
                                    std::to_string(e.n_vertices()) + " vertices");
  return out;
}

}  // namespace eigloc
