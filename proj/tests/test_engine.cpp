#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "support.hpp"

using namespace eigloc;
using namespace testsupport;

namespace {

SymMatrix mat(std::initializer_list<std::initializer_list<Rational>> rows) {
  SymMatrix m(static_cast<int>(rows.size()));
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

bool same_matrix(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) return false;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < a.order(); ++j)
      if (a.at(i, j) != b.at(i, j)) return false;
  return true;
}

std::vector<int> labels_of(const KBox& b) {
  std::vector<int> out;
  for (const auto& r : b.rows) out.push_back(r.label);
  return out;
}

std::vector<Rational> values_of(const DiagList& d) {
  std::vector<Rational> out;
  for (const auto& e : d) out.push_back(e.value);
  return out;
}

// Captures per-node boxes and emissions from a full run.
struct Capture {
  std::map<int, KBox> boxes;
  std::map<int, std::vector<Rational>> emitted;
  DiagOptions options() {
    DiagOptions opt;
    opt.observer = [this](int node, const KBox& b, std::span<const DiagEntry> em) {
      if (boxes.count(node) == 0) boxes[node] = b; // keep the combine-step box for the root
      auto& v = emitted[node];
      for (const auto& e : em) v.push_back(e.value);
    };
    return opt;
  }
};

const MatrixSpec kAdj = MatrixSpec::adjacency();

}  // namespace

TEST_CASE("leaf boxes") {
  const KBox a = leaf_box(1, 0, Rational(0), kAdj);
  CHECK(a.kp() == 0);
  CHECK(a.kpp() == 1);
  CHECK(a.m.at(0, 0) == Rational(0));
  CHECK(a.rows[0].label == 1);
  CHECK(a.rows[0].kind == RowKind::TypeII);

  const KBox b = leaf_box(2, 0, Rational(5), kAdj);
  CHECK(b.m.at(0, 0) == Rational(-5));
  CHECK(b.rows[0].label == 2);

  MatrixSpec lap;
  lap.off_diag = Rational(-1);
  lap.diagonal = {Rational(3)};
  const KBox c = leaf_box(1, 0, Rational(0), lap);
  CHECK(c.m.at(0, 0) == Rational(3));
}

TEST_CASE("merge matches the worked trace at node B") {
  const KBox g = leaf_box(1, 0, Rational(0), kAdj);
  const KBox f = leaf_box(2, 1, Rational(0), kAdj);
  const KBox b = merge_children(g, f, JoinRelation{{1, 2}}, LabelMap::identity(), LabelMap::identity(), kAdj);
  CHECK(b.kp() == 0);
  CHECK(b.kpp() == 2);
  CHECK(same_matrix(b.m, mat({{0, 1}, {1, 0}})));
  CHECK(labels_of(b) == std::vector<int>{1, 2});
}

TEST_CASE("merge with empty S is block diagonal") {
  const KBox l = leaf_box(1, 0, Rational(2), kAdj);
  const KBox r = leaf_box(2, 1, Rational(3), kAdj);
  const KBox b = merge_children(l, r, JoinRelation{}, LabelMap::identity(), LabelMap::identity(), kAdj);
  CHECK(same_matrix(b.m, mat({{-2, 0}, {0, -3}})));
}

TEST_CASE("node D: merge of E and F then duplicate reduction") {
  auto pair_box = [&](int v0) {
    const KBox x = leaf_box(1, v0, Rational(0), kAdj);
    const KBox y = leaf_box(2, v0 + 1, Rational(0), kAdj);
    return merge_children(x, y, JoinRelation{{1, 2}}, LabelMap::identity(), LabelMap::identity(), kAdj);
  };
  const KBox e = pair_box(0);
  const KBox f = pair_box(2);
  KBox d = merge_children(e, f, JoinRelation{{2, 2}}, LabelMap::identity(), LabelMap::identity(), kAdj);
  // the displayed 4x4 matrix before reduction
  CHECK(same_matrix(d.m, mat({{0, 1, 0, 0}, {1, 0, 0, 1}, {0, 0, 0, 1}, {0, 1, 1, 0}})));
  CHECK(d.kpp() == 4);

  reduce_duplicate_type_ii(d);
  CHECK(d.kp() == 2);
  CHECK(d.kpp() == 2);
  CHECK(same_matrix(d.m, mat({{0, 2, 0, -1}, {2, -2, -1, 1}, {0, -1, 0, 1}, {-1, 1, 1, 0}})));
  CHECK(labels_of(d) == std::vector<int>{1, 2, 1, 2});
}

TEST_CASE("duplicate reduction with distinct labels is a no-op") {
  const KBox l = leaf_box(1, 0, Rational(0), kAdj);
  const KBox r = leaf_box(2, 1, Rational(0), kAdj);
  KBox b = merge_children(l, r, JoinRelation{}, LabelMap::identity(), LabelMap::identity(), kAdj);
  const KBox before = b;
  reduce_duplicate_type_ii(b);
  CHECK(same_matrix(b.m, before.m));
  CHECK(b.kpp() == 2);
}

TEST_CASE("node A: four equal labels merge into the newest row") {
  // boxes transmitted by B and C in the worked example
  KBox bb;
  bb.m = mat({{0, 1}, {1, 0}});
  bb.rows = {{RowKind::TypeII, 1, 0}, {RowKind::TypeII, 2, 1}};
  KBox cc;
  cc.m = mat({{2, 1}, {1, Rational(1, 2)}});
  cc.rows = {{RowKind::TypeII, 1, 2}, {RowKind::TypeII, 2, 3}};
  LabelMap collapse;
  collapse.set(2, 1);
  KBox a = merge_children(bb, cc, JoinRelation{{1, 2}}, collapse, collapse, kAdj);
  CHECK(same_matrix(a.m, mat({{0, 1, 0, 1}, {1, 0, 0, 0}, {0, 0, 2, 1}, {1, 0, 1, Rational(1, 2)}})));
  CHECK(labels_of(a) == std::vector<int>{1, 1, 1, 1});

  reduce_duplicate_type_ii(a);
  CHECK(a.kp() == 3);
  CHECK(a.kpp() == 1);
  const Rational h(1, 2);
  CHECK(same_matrix(a.m, mat({{-3 * h, h, -3 * h, h},
                              {h, h, -h, -h},
                              {-3 * h, -h, h, h},
                              {h, -h, h, h}})));

  DiagList out;
  annihilate_m0(a, 99, out);
  CHECK(values_of(out) == std::vector<Rational>{Rational(-3, 2), Rational(2, 3), Rational(1, 2)});
  CHECK(a.kp() == 0);
  CHECK(a.kpp() == 1);
  CHECK(a.m.at(0, 0) == Rational(0));
  for (const auto& e : out) CHECK(e.node == 99);
}

TEST_CASE("annihilate on an already-zero M0 does nothing") {
  KBox b;
  b.m = mat({{0, 1}, {1, 0}});
  b.rows = {{RowKind::TypeI, 1, 0}, {RowKind::TypeII, 2, 1}};
  DiagList out;
  annihilate_m0(b, 1, out);
  CHECK(out.empty());
  CHECK(b.kp() == 1);
}

TEST_CASE("annihilate uses the 2x2 trick on a zero diagonal") {
  KBox b;
  b.m = mat({{0, 3}, {3, 0}});
  b.rows = {{RowKind::TypeI, 1, 0}, {RowKind::TypeI, 2, 1}};
  DiagList out;
  annihilate_m0(b, 1, out);
  REQUIRE(out.size() == 2);
  CHECK(values_of(out) == std::vector<Rational>{Rational(-3), Rational(3)});
  CHECK(b.order() == 0);
}

TEST_CASE("reduce_kp emits zeros for rank-deficient M1") {
  // k'=3, k''=1, M1 of rank 1: two zero rows appear
  KBox b;
  b.m = mat({{0, 0, 0, 1}, {0, 0, 0, 2}, {0, 0, 0, 3}, {1, 2, 3, 0}});
  b.rows = {{RowKind::TypeI, 1, 0}, {RowKind::TypeI, 1, 1}, {RowKind::TypeI, 1, 2}, {RowKind::TypeII, 1, 3}};
  DiagList out;
  reduce_kp(b, 5, out);
  REQUIRE(out.size() == 2);
  CHECK(out[0].value == Rational(0));
  CHECK(out[1].value == Rational(0));
  CHECK(b.kp() == 1);
  CHECK(b.kpp() == 1);

  // k'=2, k''=1, M1 = (1; 0): one zero
  KBox c;
  c.m = mat({{0, 0, 1}, {0, 0, 0}, {1, 0, 0}});
  c.rows = {{RowKind::TypeI, 1, 0}, {RowKind::TypeI, 1, 1}, {RowKind::TypeII, 1, 2}};
  DiagList out2;
  reduce_kp(c, 6, out2);
  REQUIRE(out2.size() == 1);
  CHECK(out2[0].value == Rational(0));
  CHECK(out2[0].vertex == 1);
}

TEST_CASE("reduce_kp is a no-op when kp <= kpp") {
  KBox b;
  b.m = mat({{0, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  b.rows = {{RowKind::TypeI, 1, 0}, {RowKind::TypeII, 1, 1}, {RowKind::TypeII, 2, 2}};
  DiagList out;
  reduce_kp(b, 2, out);
  CHECK(out.empty());
  CHECK(b.order() == 3);
}

TEST_CASE("combine of two distinct-label singletons emits nothing") {
  const KBox l = leaf_box(1, 0, Rational(0), kAdj);
  const KBox r = leaf_box(2, 1, Rational(0), kAdj);
  DiagList out;
  const KBox b =
      combine_boxes(l, r, JoinRelation{}, LabelMap::identity(), LabelMap::identity(), kAdj, 3, out);
  CHECK(out.empty());
  CHECK(b.kp() == 0);
  CHECK(b.kpp() == 2);
  CHECK(same_matrix(b.m, mat({{0, 0}, {0, 0}})));
}

TEST_CASE("combine on two equal-label singletons produces a [1,1] box") {
  const KBox l = leaf_box(1, 0, Rational(0), kAdj);
  const KBox r = leaf_box(1, 1, Rational(0), kAdj);
  DiagList out;
  const KBox b =
      combine_boxes(l, r, JoinRelation{}, LabelMap::identity(), LabelMap::identity(), kAdj, 3, out);
  CHECK(out.empty());
  CHECK(b.kp() == 1);
  CHECK(b.kpp() == 1);
}

TEST_CASE("diagonalize_box base cases") {
  KBox z;
  z.m = mat({{0}});
  z.rows = {{RowKind::TypeII, 1, 0}};
  DiagList out;
  diagonalize_box(z, 1, out);
  CHECK(values_of(out) == std::vector<Rational>{Rational(0)});

  KBox s;
  s.m = mat({{0, 1}, {1, 0}});
  s.rows = {{RowKind::TypeII, 1, 0}, {RowKind::TypeII, 2, 1}};
  DiagList out2;
  diagonalize_box(s, 1, out2);
  CHECK(values_of(out2) == std::vector<Rational>{Rational(-1), Rational(1)});
}

TEST_CASE("full run reproduces the worked example trace") {
  const SlickExpr e = load_fixture_slick("fig1.slick");
  Capture cap;
  const DiagList d = diagonalize(e, Rational(0), kAdj, cap.options());

  CHECK(values_of(d) == std::vector<Rational>{Rational(-2), Rational(2), Rational(-1, 2), Rational(-3, 2),
                                              Rational(2, 3), Rational(1, 2), Rational(0)});
  CHECK(inertia(d) == Inertia{3, 1, 3});
  CHECK(diag_product(d) == Rational(0));

  // post-order ids: 3, 7, 10 are the three edge joins; 11 = D; 12 = C
  for (int node : {3, 7, 10}) {
    const KBox& b = cap.boxes.at(node);
    CHECK(b.kp() == 0);
    CHECK(b.kpp() == 2);
    CHECK(same_matrix(b.m, mat({{0, 1}, {1, 0}})));
    CHECK(labels_of(b) == std::vector<int>{1, 2});
  }
  const KBox& d_box = cap.boxes.at(11);
  CHECK(d_box.kp() == 2);
  CHECK(d_box.kpp() == 2);
  CHECK(same_matrix(d_box.m, mat({{0, 2, 0, -1}, {2, -2, -1, 1}, {0, -1, 0, 1}, {-1, 1, 1, 0}})));

  CHECK(cap.emitted.at(12) == std::vector<Rational>{Rational(-2), Rational(2), Rational(-1, 2)});
  const KBox& c_box = cap.boxes.at(12);
  CHECK(c_box.kp() == 0);
  CHECK(c_box.kpp() == 2);
  CHECK(same_matrix(c_box.m, mat({{2, 1}, {1, Rational(1, 2)}})));
  CHECK(labels_of(c_box) == std::vector<int>{1, 2});
}

TEST_CASE("single atom with a shift") {
  const SlickExpr e = parse_slick("k 1\n(v 1 a)");
  const DiagList d = diagonalize(e, Rational(7), kAdj);
  CHECK(values_of(d) == std::vector<Rational>{Rational(-7)});
}

TEST_CASE("K2 inertia") {
  const SlickExpr e = load_fixture_slick("k2.slick");
  CHECK(inertia(diagonalize(e, Rational(0), kAdj)) == Inertia{1, 0, 1});
}

TEST_CASE("emission count equals vertex count") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 1 + static_cast<int>(seed % 12);
    const SlickExpr e = gen_slick(n, 1 + static_cast<int>(seed % 4), seed);
    CHECK(diagonalize(e, Rational(1, 2), kAdj).size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("row kinds only move forward") {
  // TypeII -> TypeI -> diagonalized; once a vertex leaves the boxes it
  // never reappears.
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SlickExpr e = gen_slick(2 + static_cast<int>(seed % 10), 1 + static_cast<int>(seed % 4), seed);
    std::map<int, RowKind> kind;
    std::map<int, bool> gone;
    DiagOptions opt;
    opt.observer = [&](int, const KBox& b, std::span<const DiagEntry> em) {
      for (const auto& r : b.rows) {
        REQUIRE(!gone[r.vertex]);
        auto it = kind.find(r.vertex);
        if (it != kind.end() && it->second == RowKind::TypeI) REQUIRE(r.kind == RowKind::TypeI);
        kind[r.vertex] = r.kind;
      }
      for (const auto& entry : em) {
        REQUIRE(!gone[entry.vertex]);
        gone[entry.vertex] = true;
      }
    };
    diagonalize(e, Rational(0), kAdj, opt);
  }
}

TEST_CASE("box validation rejects corrupted boxes") {
  KBox b;
  b.m = mat({{0, 1}, {2, 0}}); // asymmetric
  b.rows = {{RowKind::TypeII, 1, 0}, {RowKind::TypeII, 2, 1}};
  CHECK_THROWS_AS(validate_box(b, 2, 7), InvariantViolation);
  try {
    validate_box(b, 2, 7);
  } catch (const InvariantViolation& err) {
    CHECK(err.node == 7);
  }

  KBox dup;
  dup.m = mat({{0, 0}, {0, 0}});
  dup.rows = {{RowKind::TypeII, 1, 0}, {RowKind::TypeII, 1, 1}};
  CHECK_THROWS_AS(validate_box(dup, 2, 3), InvariantViolation); // duplicate type-ii labels

  KBox shape;
  shape.m = mat({{0, 0}, {0, 0}});
  shape.rows = {{RowKind::TypeI, 1, 0}, {RowKind::TypeI, 2, 1}};
  CHECK_THROWS_AS(validate_box(shape, 2, 4), InvariantViolation); // k' > k''

  const KBox ok = leaf_box(1, 0, Rational(0), kAdj);
  CHECK_NOTHROW(validate_box(ok, 2, 1));
}

TEST_CASE("zero off-diagonal spec is rejected") {
  MatrixSpec spec;
  spec.off_diag = Rational(0);
  const SlickExpr e = load_fixture_slick("k2.slick");
  CHECK_THROWS_AS(diagonalize(e, Rational(0), spec), InvariantViolation);
}

TEST_CASE("operation count grows with k within the cubic envelope") {
  DiagOptions opt;
  opt.validate = false;
  auto ops_for = [&](int k) {
    const SlickExpr e = gen_slick(5000, k, 17);
    reset_rational_ops();
    diagonalize(e, Rational(0), kAdj, opt);
    return rational_ops();
  };
  const auto ops2 = ops_for(2);
  const auto ops4 = ops_for(4);
  CHECK(ops4 > ops2);
  // doubling k multiplies the bound by 8; allow slack but not more
  CHECK(ops4 < 16 * ops2);
}

TEST_CASE("generalized spec: laplacian leaf uses the degree") {
  const SlickExpr e = load_fixture_slick("fig1.slick");
  const MatrixSpec lap = MatrixSpec::laplacian(eval_slick(e));
  const DiagList d = diagonalize(e, Rational(0), lap);
  const Inertia in = inertia(d);
  CHECK(in.n_minus == 0);           // Laplacian is positive semidefinite
  CHECK(in.n_zero == 1);            // one connected component
  CHECK(in.n_plus == 6);
}
