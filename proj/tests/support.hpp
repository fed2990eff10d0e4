#pragma once

#include <random>
#include <string>

#include <eigloc/eigloc.hpp>

namespace testsupport {

using namespace eigloc;

inline std::string fixture(const std::string& name) {
  return std::string(EIGLOC_FIXTURE_DIR) + "/" + name;
}

inline SlickExpr load_fixture_slick(const std::string& name) { return parse_slick(read_file(fixture(name))); }

inline ClassicExpr load_fixture_classic(const std::string& name) {
  return parse_classic(read_file(fixture(name)));
}

inline Rational diag_product(const DiagList& d) {
  Rational p(1);
  for (const auto& e : d) p *= e.value;
  return p;
}

// K2 as a slick expression block appended to e: 1(x) join 1(y) with S={(1,1)}.
inline int add_k2(SlickExpr& e, int& counter) {
  const int a = e.add_atom(1, "v" + std::to_string(counter++));
  const int b = e.add_atom(1, "v" + std::to_string(counter++));
  return e.add_join(JoinRelation{{1, 1}}, LabelMap::identity(), LabelMap::identity(), a, b);
}

// P4 block: repeatedly join a fresh live vertex (label 1) onto the path end
// and retire the old end to label 2.
inline int add_p4(SlickExpr& e, int& counter) {
  LabelMap retire;
  retire.set(1, 2);
  int node = e.add_atom(1, "v" + std::to_string(counter++));
  for (int step = 0; step < 3; ++step) {
    const int next = e.add_atom(1, "v" + std::to_string(counter++));
    node = e.add_join(JoinRelation{{1, 1}}, retire, LabelMap::identity(), node, next);
  }
  return node;
}

// Disjoint union (S = empty) of `copies` blocks produced by `block`.
template <class BlockFn>
SlickExpr disjoint_blocks(int width, int copies, BlockFn block) {
  SlickExpr e;
  e.width = width;
  int counter = 0;
  int acc = block(e, counter);
  for (int i = 1; i < copies; ++i) {
    const int next = block(e, counter);
    acc = e.add_join(JoinRelation{}, LabelMap::identity(), LabelMap::identity(), acc, next);
  }
  e.root = acc;
  return e;
}

// Two random marked cographs joined across their label-2 vertices: a random
// instance of the arbitrary-cross-join construction (k = 2, S = {(2,2)}).
inline SlickExpr random_cograph_join(int n_left, int n_right, std::mt19937_64& rng) {
  SlickExpr e = gen_marked_cograph(n_left, 40, rng, 0);
  const int left = e.root;
  const int right = e.absorb(gen_marked_cograph(n_right, 40, rng, n_left));
  e.root = e.add_join(JoinRelation{{2, 2}}, LabelMap::identity(), LabelMap::identity(), left, right);
  return e;
}

}  // namespace testsupport
