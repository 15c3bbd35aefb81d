#include <doctest.h>

#include "quiltkit/matrix.hpp"

using namespace quiltkit;

static QMat qmat(int r, int c, std::vector<int> v) {
  QMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = v[i * c + j];
  return m;
}

TEST_CASE("rational parse and print round trip") {
  CHECK(rational_to_string(parse_rational("3/6")) == "1/2");
  CHECK(rational_to_string(parse_rational("-4/2")) == "-2");
  CHECK(rational_to_string(Rational(7)) == "7");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("rank and rref") {
  QMat m = qmat(3, 3, {1, 2, 3, 2, 4, 6, 1, 0, 1});
  CHECK(rank(m) == 2);
  CHECK(rank(QMat(0, 0)) == 0);
  CHECK(rank(QMat::identity(4)) == 4);
}

TEST_CASE("column span canonical form") {
  QMat a = qmat(3, 2, {1, 0, 0, 1, 0, 0});
  QMat b = qmat(3, 2, {2, 3, 1, 1, 0, 0});
  CHECK(same_column_span(a, b));
  QMat c = qmat(3, 2, {1, 0, 0, 0, 0, 1});
  CHECK_FALSE(same_column_span(a, c));
}

TEST_CASE("kernel basis solves the system") {
  QMat m = qmat(2, 3, {1, 1, 0, 0, 1, 1});
  QMat k = kernel_basis(m);
  CHECK(k.cols() == 1);
  CHECK((m * k).is_zero());
  CHECK(kernel_basis(QMat::identity(3)).cols() == 0);
}

TEST_CASE("signature by congruence") {
  // diag(2, -3, 0)
  QMat d(3, 3);
  d(0, 0) = 2;
  d(1, 1) = -3;
  Signature s = symmetric_signature(d);
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);
  CHECK(s.zero == 1);

  // hyperbolic plane: zero diagonal, off diagonal 1
  QMat h(2, 2);
  h(0, 1) = 1;
  h(1, 0) = 1;
  s = symmetric_signature(h);
  CHECK(s.positive == 1);
  CHECK(s.negative == 1);
  CHECK(s.value() == 0);
}

TEST_CASE("smith normal form") {
  ZMat m(2, 2);
  m(0, 0) = 2;
  m(1, 1) = 6;
  auto s = smith_normal_form(m);
  REQUIRE(s.rank() == 2);
  CHECK(s.invariant_factors[0] == 2);
  CHECK(s.invariant_factors[1] == 6);

  // [[2,0],[0,3]] has invariant factors 1, 6
  ZMat n(2, 2);
  n(0, 0) = 2;
  n(1, 1) = 3;
  s = smith_normal_form(n);
  REQUIRE(s.rank() == 2);
  CHECK(s.invariant_factors[0] == 1);
  CHECK(s.invariant_factors[1] == 6);

  ZMat z(3, 2);
  CHECK(smith_normal_form(z).rank() == 0);
}

TEST_CASE("rank mod 2") {
  ZMat m(2, 2);
  m(0, 0) = 2;  // 0 mod 2
  m(0, 1) = 1;
  m(1, 0) = 3;  // 1 mod 2
  m(1, 1) = 1;
  CHECK(rank_mod2(m) == 2);
  ZMat e(2, 2);
  e(0, 0) = 2;
  e(1, 1) = 4;
  CHECK(rank_mod2(e) == 0);
}
