#include <doctest.h>

#include <random>

#include "quiltkit/symplectic.hpp"
#include "test_helpers.hpp"

using namespace quiltkit;
using qktest::random_lagrangian;
using qktest::random_symplectic;

namespace {

QMat qmat(int r, int c, std::vector<int> v) {
  QMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = v[i * c + j];
  return m;
}

}  // namespace

TEST_CASE("standard space shapes") {
  SymplecticSpace v0 = standard_space(0);
  CHECK(v0.dim == 0);
  v0.check();

  SymplecticSpace v1 = standard_space(1);
  CHECK(v1.form == qmat(2, 2, {0, 1, -1, 0}));
  v1.check();

  SymplecticSpace v2 = standard_space(2);
  CHECK(v2.form == QMat::block_diag(v1.form, v1.form));
  v2.check();
}

TEST_CASE("dual space negates the form and is an involution") {
  SymplecticSpace v = standard_space(1);
  CHECK(dual_space(v).form == qmat(2, 2, {0, -1, 1, 0}));
  CHECK(dual_space(dual_space(v)) == v);

  // a Lagrangian of V is a Lagrangian of the dual
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    SymplecticSpace w = standard_space(2);
    LagrangianSubspace l = random_lagrangian(w, rng);
    CHECK(is_lagrangian_in(l.basis, w));
    CHECK(is_lagrangian_in(l.basis, dual_space(w)));
  }
}

TEST_CASE("product space") {
  SymplecticSpace v = standard_space(1);
  SymplecticSpace p = product_space(v, v);
  CHECK(p.dim == 4);
  p.check();
  CHECK(product_space(standard_space(0), v) == v);
  // associative up to coordinate relabeling: here literally equal
  CHECK(product_space(product_space(v, v), v) ==
        product_space(v, product_space(v, v)));
}

TEST_CASE("diagonal") {
  SymplecticSpace v = standard_space(1);
  LagrangianCorrespondence d = diagonal(v);
  CHECK(d.basis == qmat(4, 2, {1, 0, 0, 1, 1, 0, 0, 1}));
  d.check();

  std::mt19937_64 rng(11);
  for (int n : {1, 2, 3, 4}) {
    SymplecticSpace w = standard_space(n);
    LagrangianCorrespondence dg = diagonal(w);
    CHECK(is_lagrangian_in(dg.basis, dg.ambient()));
  }
}

TEST_CASE("transpose") {
  SymplecticSpace v = standard_space(1);
  CHECK(transpose(diagonal(v)).same_span(diagonal(v)));

  std::mt19937_64 rng(13);
  QMat a = random_symplectic(v, rng);
  LagrangianCorrespondence g = graph(a, v);
  CHECK(transpose(transpose(g)).same_span(g));

  // transpose of a graph is the graph of the inverse: check span equality
  // against the explicit inverse via solving
  QMat id = QMat::identity(2);
  // inverse of a symplectic 2x2: det = 1, [[d,-b],[-c,a]]
  QMat inv(2, 2);
  inv(0, 0) = a(1, 1);
  inv(0, 1) = -a(0, 1);
  inv(1, 0) = -a(1, 0);
  inv(1, 1) = a(0, 0);
  CHECK(transpose(g).same_span(graph(inv, v)));
}

TEST_CASE("graph construction and checks") {
  SymplecticSpace v = standard_space(1);
  CHECK(graph(QMat::identity(2), v).same_span(diagonal(v)));

  QMat shear = qmat(2, 2, {1, 1, 0, 1});
  LagrangianCorrespondence g = graph(shear, v);
  QMat expected = qmat(4, 2, {1, 0, 0, 1, 1, 1, 0, 1});
  CHECK(same_column_span(g.basis, expected));

  QMat rot = qmat(2, 2, {0, 1, -1, 0});
  CHECK(is_lagrangian_in(graph(rot, v).basis, graph(rot, v).ambient()));

  QMat bad = qmat(2, 2, {2, 0, 0, 1});
  CHECK_THROWS_AS(graph(bad, v), Error);
}

TEST_CASE("is_lagrangian basics") {
  SymplecticSpace v = standard_space(1);
  CHECK(is_lagrangian_in(qmat(2, 1, {1, 0}), v));
  CHECK_FALSE(is_lagrangian_in(QMat::identity(2), v));
  CHECK(is_lagrangian_in(qmat(2, 1, {0, 1}), v));
  CHECK_THROWS_AS(is_lagrangian_in(QMat::identity(3), v), Error);
}

TEST_CASE("compose identity laws") {
  std::mt19937_64 rng(17);
  for (int n : {1, 2}) {
    SymplecticSpace v = standard_space(n);
    QMat a = random_symplectic(v, rng);
    LagrangianCorrespondence g = graph(a, v);
    CompositionResult left = compose(diagonal(v), g);
    REQUIRE(left.embedded);
    CHECK(left.composition->same_span(g));
    CompositionResult right = compose(g, diagonal(v));
    REQUIRE(right.embedded);
    CHECK(right.composition->same_span(g));
  }
}

TEST_CASE("compose graphs multiplies the maps") {
  std::mt19937_64 rng(19);
  for (int n : {1, 2}) {
    SymplecticSpace v = standard_space(n);
    for (int trial = 0; trial < 25; ++trial) {
      QMat a = random_symplectic(v, rng);
      QMat b = random_symplectic(v, rng);
      CompositionResult r = compose(graph(a, v), graph(b, v));
      REQUIRE(r.transverse);
      REQUIRE(r.embedded);
      CHECK(r.composition->same_span(graph(b * a, v)));
    }
  }
}

TEST_CASE("split composition") {
  // L01 = L0 x L in V0- x V1, L12 = L' x L2 with L transverse to L'
  SymplecticSpace v0 = standard_space(1), v1 = standard_space(1), v2 = standard_space(1);
  QMat l0 = qmat(2, 1, {1, 0});
  QMat l = qmat(2, 1, {0, 1});
  QMat lp = qmat(2, 1, {1, 0});
  QMat l2 = qmat(2, 1, {1, 1});
  LagrangianCorrespondence l01{v0, v1, QMat::block_diag(l0, l)};
  LagrangianCorrespondence l12{v1, v2, QMat::block_diag(lp, l2)};
  l01.check();
  l12.check();
  CompositionResult r = compose(l01, l12);
  REQUIRE(r.transverse);
  REQUIRE(r.embedded);
  CHECK(same_column_span(r.composition->basis, QMat::block_diag(l0, l2)));
}

TEST_CASE("linear rigidity: transverse implies embedded, kernels need") {
  // a nonzero projection kernel vector x1 forces both middle spans into
  // its symplectic orthogonal complement, so transversality and a kernel
  // exclude each other at the linear level; check both directions on
  // random and on engineered pairs
  std::mt19937_64 rng(23);
  SymplecticSpace v0 = standard_space(1), v1 = standard_space(2),
                  v2 = standard_space(1);
  int transverse_seen = 0, kernel_seen = 0;
  auto kernel_oracle = [&](const LagrangianCorrespondence& l01,
                           const LagrangianCorrespondence& l12) {
    QMat top_a = l01.basis.row_slice(0, 2);
    QMat bot_a = l01.basis.row_slice(2, 6);
    QMat img_a = bot_a * kernel_basis(top_a);  // {x1 : (0,x1) in L01}
    QMat top_b = l12.basis.row_slice(0, 4);
    QMat bot_b = l12.basis.row_slice(4, 6);
    QMat img_b = top_b * kernel_basis(bot_b);  // {x1 : (x1,0) in L12}
    return rank(img_a) + rank(img_b) - rank(QMat::hcat(img_a, img_b));
  };
  for (int trial = 0; trial < 200; ++trial) {
    LagrangianSubspace a =
        random_lagrangian(product_space(dual_space(v0), v1), rng);
    LagrangianSubspace b =
        random_lagrangian(product_space(dual_space(v1), v2), rng);
    LagrangianCorrespondence l01{v0, v1, a.basis};
    LagrangianCorrespondence l12{v1, v2, b.basis};
    CompositionResult r = compose(l01, l12);
    CHECK(r.kernel_dim == kernel_oracle(l01, l12));
    if (r.transverse) {
      ++transverse_seen;
      CHECK(r.embedded);
      CHECK(r.kernel_dim == 0);
      CHECK(r.composition->basis.cols() == 2);  // n0 + n2
    }
    if (r.kernel_dim > 0) {
      ++kernel_seen;
      CHECK_FALSE(r.transverse);
      CHECK_FALSE(r.composition.has_value());
    }
  }
  CHECK(transverse_seen > 0);

  // engineered kernel: split correspondences sharing the middle plane
  QMat l0(2, 1), plane(4, 2), l2(2, 1);
  l0(0, 0) = 1;
  plane(0, 0) = 1;
  plane(2, 1) = 1;
  l2(1, 0) = 1;
  LagrangianCorrespondence l01{v0, v1, QMat::block_diag(l0, plane)};
  LagrangianCorrespondence l12{v1, v2, QMat::block_diag(plane, l2)};
  CompositionResult r = compose(l01, l12);
  CHECK_FALSE(r.transverse);
  CHECK(r.kernel_dim == 2);
  CHECK(r.kernel_dim == kernel_oracle(l01, l12));
}

TEST_CASE("composition invariants") {
  std::mt19937_64 rng(29);
  SymplecticSpace v = standard_space(2);
  for (int trial = 0; trial < 20; ++trial) {
    QMat a = random_symplectic(v, rng);
    QMat b = random_symplectic(v, rng);
    QMat c = random_symplectic(v, rng);
    LagrangianCorrespondence ga = graph(a, v), gb = graph(b, v), gc = graph(c, v);

    // embedded composition is Lagrangian of the right dimension
    CompositionResult ab = compose(ga, gb);
    REQUIRE(ab.embedded);
    CHECK(is_lagrangian_in(ab.composition->basis, ab.composition->ambient()));
    CHECK(ab.composition->basis.cols() == 4);

    // associativity on graphs
    CompositionResult bc = compose(gb, gc);
    REQUIRE(bc.embedded);
    CompositionResult left = compose(*ab.composition, gc);
    CompositionResult right = compose(ga, *bc.composition);
    REQUIRE(left.embedded);
    REQUIRE(right.embedded);
    CHECK(left.composition->same_span(*right.composition));

    // transpose anti-homomorphism
    CompositionResult anti = compose(transpose(gb), transpose(ga));
    REQUIRE(anti.embedded);
    CHECK(transpose(*ab.composition).same_span(*anti.composition));
  }
}

TEST_CASE("composition with zero-dimensional spaces") {
  // boundary conditions as correspondences from the point
  SymplecticSpace pt = standard_space(0), v = standard_space(1);
  QMat l0 = qmat(2, 1, {1, 0});
  LagrangianCorrespondence from_pt{pt, v, l0};
  from_pt.check();
  QMat l1 = qmat(2, 1, {0, 1});
  LagrangianCorrespondence to_pt{v, pt, l1};
  to_pt.check();
  CompositionResult r = compose(from_pt, to_pt);
  REQUIRE(r.transverse);
  REQUIRE(r.embedded);
  CHECK(r.composition->basis.rows() == 0);
  CHECK(r.composition->basis.cols() == 0);
}

TEST_CASE("space mismatch raises") {
  LagrangianCorrespondence a = diagonal(standard_space(1));
  LagrangianCorrespondence b = diagonal(standard_space(2));
  CHECK_THROWS_AS(compose(a, b), Error);
}
