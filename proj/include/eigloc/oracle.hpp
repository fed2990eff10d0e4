#pragma once

#include <stdexcept>
#include <vector>

#include "eigloc/engine.hpp"
#include "eigloc/eval.hpp"
#include "eigloc/graph.hpp"
#include "eigloc/rational.hpp"
#include "eigloc/spectral.hpp"

namespace eigloc {

// Independent verification path: materialize the full matrix from the
// evaluated graph and diagonalize it densely, with no parse-tree structure.
// O(n^3) exact arithmetic; exists to check the engine, not to compete.
struct DenseSymMatrix {
  int n = 0;
  std::vector<Rational> a;

  DenseSymMatrix() = default;
  explicit DenseSymMatrix(int n) : n(n), a(static_cast<std::size_t>(n) * n) {}

  Rational& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Rational& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline DenseSymMatrix build_matrix(const LabeledGraph& g, const Rational& c, const MatrixSpec& spec) {
  DenseSymMatrix m(g.order());
  for (int i = 0; i < g.order(); ++i) m.at(i, i) = spec.diag_of(g.vertex_ids[i]) - c;
  for (const auto& [u, v] : g.edges) {
    m.at(u, v) = spec.off_diag;
    m.at(v, u) = spec.off_diag;
  }
  return m;
}

// Plain symmetric congruence elimination: pivot on the lowest nonzero
// diagonal, use the (0 a; a 0) -> (-a 0; 0 a) rewrite when the whole
// diagonal vanishes, and emit zeros once the live submatrix is zero.
inline std::vector<Rational> dense_congruent_diagonalize(DenseSymMatrix m) {
  const int n = m.n;
  std::vector<Rational> diag;
  diag.reserve(n);
  std::vector<char> alive(n, 1);
  std::vector<int> live;
  for (int i = 0; i < n; ++i) live.push_back(i);

  auto pair_op = [&](int dst, int src, const Rational& f) {
    for (int l : live) {
      const Rational& s = m.at(src, l);
      if (!s.is_zero()) m.at(dst, l) += f * s;
    }
    for (int l : live) {
      const Rational& s = m.at(l, src);
      if (!s.is_zero()) m.at(l, dst) += f * s;
    }
  };

  while (!live.empty()) {
    int pivot = -1;
    for (int i : live)
      if (!m.at(i, i).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot >= 0) {
      const Rational d = m.at(pivot, pivot);
      for (int j : live) {
        if (j == pivot) continue;
        const Rational& v = m.at(pivot, j);
        if (!v.is_zero()) pair_op(j, pivot, -(v / d));
      }
      diag.push_back(d);
      alive[pivot] = 0;
      std::erase(live, pivot);
      continue;
    }
    int ti = -1, tj = -1;
    for (std::size_t x = 0; x < live.size() && ti < 0; ++x)
      for (std::size_t y = x + 1; y < live.size(); ++y)
        if (!m.at(live[x], live[y]).is_zero()) {
          ti = live[x];
          tj = live[y];
          break;
        }
    if (ti < 0) {
      diag.insert(diag.end(), live.size(), Rational(0));
      break;
    }
    pair_op(tj, ti, Rational(1, 2));
    pair_op(ti, tj, Rational(-1));
  }
  return diag;
}

// Exact determinant by Gaussian elimination with row swaps (sign tracked).
inline Rational determinant(DenseSymMatrix m) {
  const int n = m.n;
  Rational det(1);
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Rational(0);
    if (pivot != col) {
      for (int c = col; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
      sign = -sign;
    }
    const Rational p = m.at(col, col);
    det *= p;
    for (int r = col + 1; r < n; ++r) {
      const Rational& v = m.at(r, col);
      if (v.is_zero()) continue;
      const Rational f = v / p;
      for (int c = col + 1; c < n; ++c) {
        const Rational& s = m.at(col, c);
        if (!s.is_zero()) m.at(r, c) -= f * s;
      }
      m.at(r, col) = Rational(0);
    }
  }
  return sign < 0 ? -det : det;
}

inline Inertia oracle_inertia(const SlickExpr& e, const Rational& c, const MatrixSpec& spec) {
  const LabeledGraph g = eval_slick(e);
  std::vector<Rational> diag = dense_congruent_diagonalize(build_matrix(g, c, spec));
  Inertia in;
  for (const Rational& v : diag) {
    const int s = v.sign();
    if (s > 0)
      ++in.n_plus;
    else if (s < 0)
      ++in.n_minus;
    else
      ++in.n_zero;
  }
  return in;
}

}  // namespace eigloc
