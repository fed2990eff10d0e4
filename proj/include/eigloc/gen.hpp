#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "eigloc/expr.hpp"

namespace eigloc {

namespace detail {

// Bounded draw built directly on the raw engine output so that a seed
// pins the expression bit-for-bit on every platform.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline int gen_slick_rec(SlickExpr& e, std::mt19937_64& rng, int n, int& counter) {
  if (n == 1) {
    const int label = 1 + static_cast<int>(draw(rng, e.width));
    return e.add_atom(label, "v" + std::to_string(counter++));
  }
  const int nl = 1 + static_cast<int>(draw(rng, n - 1));
  const int left = gen_slick_rec(e, rng, nl, counter);
  const int right = gen_slick_rec(e, rng, n - nl, counter);
  JoinRelation s;
  for (int i = 1; i <= e.width; ++i)
    for (int j = 1; j <= e.width; ++j)
      if (draw(rng, 3) == 0) s.insert(i, j);
  LabelMap L, R;
  for (int l = 1; l <= e.width; ++l) L.set(l, 1 + static_cast<int>(draw(rng, e.width)));
  for (int l = 1; l <= e.width; ++l) R.set(l, 1 + static_cast<int>(draw(rng, e.width)));
  return e.add_join(std::move(s), std::move(L), std::move(R), left, right);
}

inline int gen_classic_rec(ClassicExpr& e, std::mt19937_64& rng, int n, int& counter) {
  if (n == 1) {
    const int label = 1 + static_cast<int>(draw(rng, e.width));
    return e.add_atom(label, "v" + std::to_string(counter++));
  }
  const int nl = 1 + static_cast<int>(draw(rng, n - 1));
  const int left = gen_classic_rec(e, rng, nl, counter);
  const int right = gen_classic_rec(e, rng, n - nl, counter);
  int node = e.add_union(left, right);
  const int wrappers = static_cast<int>(draw(rng, 3));
  for (int w = 0; w < wrappers; ++w) {
    const int i = 1 + static_cast<int>(draw(rng, e.width));
    int j = 1 + static_cast<int>(draw(rng, e.width));
    if (draw(rng, 2) == 0 && e.width > 1) {
      while (j == i) j = 1 + static_cast<int>(draw(rng, e.width));
      node = e.add_eta(i, j, node);
    } else {
      node = e.add_rho(i, j, node);
    }
  }
  return node;
}

}  // namespace detail

// Random slick k-expression with exactly n atoms; deterministic per seed.
// Tree shapes come from uniform splits, S includes each pair of [k]^2 with
// probability 1/3, L and R are uniform random functions.
inline SlickExpr gen_slick(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("gen_slick: need n >= 1 and k >= 1");
  SlickExpr e;
  e.width = k;
  std::mt19937_64 rng(seed);
  int counter = 0;
  e.root = detail::gen_slick_rec(e, rng, n, counter);
  return e;
}

// Random classic k-expression with n atoms: unions with 0-2 random eta/rho
// wrappers above each one.
inline ClassicExpr gen_classic(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("gen_classic: need n >= 1 and k >= 1");
  ClassicExpr e;
  e.width = k;
  std::mt19937_64 rng(seed);
  int counter = 0;
  e.root = detail::gen_classic_rec(e, rng, n, counter);
  return e;
}

// Random cograph as a width-`width` slick expression: single-label
// structure (every union either disjoint or complete join), with each
// vertex independently marked label 2 with probability `mark_percent`/100.
// Marked vertices are exactly the label-2 ones, so two such expressions
// joined with S = {(2,2)} give the arbitrary-cross-join construction.
inline int gen_marked_cograph_rec(SlickExpr& e, std::mt19937_64& rng, int n, int mark_percent, int& counter) {
  if (n == 1) {
    const bool marked = detail::draw(rng, 100) < static_cast<std::uint64_t>(mark_percent);
    return e.add_atom(marked ? 2 : 1, "v" + std::to_string(counter++));
  }
  const int nl = 1 + static_cast<int>(detail::draw(rng, n - 1));
  const int left = gen_marked_cograph_rec(e, rng, nl, mark_percent, counter);
  const int right = gen_marked_cograph_rec(e, rng, n - nl, mark_percent, counter);
  JoinRelation s;
  if (detail::draw(rng, 2) == 0)
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j) s.insert(i, j); // complete join, labels untouched
  return e.add_join(std::move(s), LabelMap::identity(), LabelMap::identity(), left, right);
}

inline SlickExpr gen_marked_cograph(int n, int mark_percent, std::mt19937_64& rng, int first_vertex = 0) {
  SlickExpr e;
  e.width = 2;
  int counter = first_vertex;
  e.root = gen_marked_cograph_rec(e, rng, n, mark_percent, counter);
  return e;
}

}  // namespace eigloc
