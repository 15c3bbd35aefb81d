#pragma once

#include <optional>
#include <utility>

#include "quiltkit/matrix.hpp"

namespace quiltkit {

/// Exact rational symplectic vector space: even dimension and an
/// antisymmetric nondegenerate form matrix.
struct SymplecticSpace {
  int dim = 0;
  QMat form;  // dim x dim

  bool operator==(const SymplecticSpace& o) const {
    return dim == o.dim && form == o.form;
  }
  bool operator!=(const SymplecticSpace& o) const { return !(*this == o); }

  void check() const {
    if (dim < 0 || dim % 2 != 0)
      throw Error("DimensionMismatch", "space dimension must be even and >= 0");
    if (form.rows() != dim || form.cols() != dim)
      throw Error("DimensionMismatch", "form matrix shape does not match dim");
    if (form != -form.transposed())
      throw Error("DimensionMismatch", "form is not antisymmetric");
    if (rank(form) != dim)
      throw Error("DimensionMismatch", "form is degenerate");
  }

  /// omega(x, y) = x^T form y
  Rational pair(const QMat& x, const QMat& y) const {
    QMat r = x.transposed() * form * y;
    return r.rows() == 1 && r.cols() == 1 ? r(0, 0) : Rational(0);
  }
};

/// R^{2n} with pairwise (p_i, q_i) coordinates; the form is block diagonal
/// with [[0,1],[-1,0]] blocks, so omega = sum p_i q'_i - q_i p'_i.
inline SymplecticSpace standard_space(int n) {
  SymplecticSpace v;
  v.dim = 2 * n;
  v.form = QMat(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    v.form(2 * i, 2 * i + 1) = 1;
    v.form(2 * i + 1, 2 * i) = -1;
  }
  return v;
}

/// Same space with the form negated.
inline SymplecticSpace dual_space(const SymplecticSpace& v) {
  return SymplecticSpace{v.dim, -v.form};
}

/// Block-diagonal product; coordinates of v0 first.
inline SymplecticSpace product_space(const SymplecticSpace& v0,
                                     const SymplecticSpace& v1) {
  return SymplecticSpace{v0.dim + v1.dim, QMat::block_diag(v0.form, v1.form)};
}

inline bool is_lagrangian_in(const QMat& basis, const SymplecticSpace& v) {
  if (basis.rows() != v.dim)
    throw Error("DimensionMismatch", "basis rows do not match space dimension");
  if (rank(basis) != v.dim / 2) return false;
  return (basis.transposed() * v.form * basis).is_zero();
}

struct LagrangianSubspace {
  SymplecticSpace space;
  QMat basis;  // dim x n, columns span the subspace

  void check() const {
    space.check();
    if (basis.rows() != space.dim || basis.cols() != space.dim / 2)
      throw Error("DimensionMismatch", "Lagrangian basis must be dim x dim/2");
    if (rank(basis) != space.dim / 2)
      throw Error("DimensionMismatch", "Lagrangian basis is rank deficient");
    if (!(basis.transposed() * space.form * basis).is_zero())
      throw Error("DimensionMismatch", "form does not vanish on the span");
  }

  bool same_span(const LagrangianSubspace& o) const {
    return space == o.space && same_column_span(basis, o.basis);
  }
};

/// Lagrangian correspondence from `source` to `target`: a Lagrangian
/// subspace of source^- x target, with source coordinates first.
struct LagrangianCorrespondence {
  SymplecticSpace source, target;
  QMat basis;  // (dim0+dim1) x (n0+n1)

  SymplecticSpace ambient() const {
    return product_space(dual_space(source), target);
  }

  void check() const {
    source.check();
    target.check();
    SymplecticSpace amb = ambient();
    LagrangianSubspace l{amb, basis};
    l.check();
  }

  bool same_span(const LagrangianCorrespondence& o) const {
    return source == o.source && target == o.target &&
           same_column_span(basis, o.basis);
  }
};

/// The diagonal {(x,x)}, Lagrangian in V^- x V.
inline LagrangianCorrespondence diagonal(const SymplecticSpace& v) {
  QMat b(2 * v.dim, v.dim);
  for (int i = 0; i < v.dim; ++i) {
    b(i, i) = 1;
    b(v.dim + i, i) = 1;
  }
  return LagrangianCorrespondence{v, v, b};
}

/// Swap the two factors: a correspondence from V1 to V0.
inline LagrangianCorrespondence transpose(const LagrangianCorrespondence& l) {
  int d0 = l.source.dim, d1 = l.target.dim;
  QMat b(d0 + d1, l.basis.cols());
  for (int c = 0; c < l.basis.cols(); ++c) {
    for (int r = 0; r < d1; ++r) b(r, c) = l.basis(d0 + r, c);
    for (int r = 0; r < d0; ++r) b(d1 + r, c) = l.basis(r, c);
  }
  return LagrangianCorrespondence{l.target, l.source, b};
}

/// Graph {(x, Ax)} of a linear symplectomorphism A of V.
inline LagrangianCorrespondence graph(const QMat& a, const SymplecticSpace& v) {
  if (a.rows() != v.dim || a.cols() != v.dim)
    throw Error("DimensionMismatch", "graph matrix must be dim x dim");
  if (a.transposed() * v.form * a != v.form)
    throw Error("NotSymplectic", "matrix does not preserve the form");
  QMat b = QMat::vcat(QMat::identity(v.dim), a);
  return LagrangianCorrespondence{v, v, b};
}

struct CompositionResult {
  bool transverse = false;
  bool embedded = false;
  int kernel_dim = 0;
  std::optional<LagrangianCorrespondence> composition;
};

/// Geometric composition of correspondences V0 -> V1 -> V2: the image of
/// the fiber product over V1 under projection to V0 x V2. Transversality
/// and the embedding kernel are decided exactly.
inline CompositionResult compose(const LagrangianCorrespondence& l01,
                                 const LagrangianCorrespondence& l12) {
  if (l01.target != l12.source)
    throw Error("SpaceMismatch", "middle spaces differ");
  const int d0 = l01.source.dim, d1 = l01.target.dim, d2 = l12.target.dim;
  const int k01 = l01.basis.cols(), k12 = l12.basis.cols();

  // fiber product: pairs (a, b) of coefficient vectors with matching V1 parts
  QMat mid01 = l01.basis.row_slice(d0, d0 + d1);
  QMat mid12 = l12.basis.row_slice(0, d1);
  QMat sys = QMat::hcat(mid01, -mid12);  // d1 x (k01+k12)
  QMat fib = kernel_basis(sys);

  CompositionResult res;
  res.transverse = rank(sys) == d1;

  // projection of the fiber product to V0 x V2
  QMat top01 = l01.basis.row_slice(0, d0);
  QMat bot12 = l12.basis.row_slice(d1, d1 + d2);
  QMat proj(d0 + d2, fib.cols());
  for (int c = 0; c < fib.cols(); ++c) {
    for (int r = 0; r < d0; ++r) {
      Rational s = 0;
      for (int k = 0; k < k01; ++k) s += top01(r, k) * fib(k, c);
      proj(r, c) = s;
    }
    for (int r = 0; r < d2; ++r) {
      Rational s = 0;
      for (int k = 0; k < k12; ++k) s += bot12(r, k) * fib(k01 + k, c);
      proj(d0 + r, c) = s;
    }
  }
  res.kernel_dim = fib.cols() - rank(proj);
  res.embedded = res.transverse && res.kernel_dim == 0;
  if (res.embedded) {
    LagrangianCorrespondence comp{l01.source, l12.target,
                                  column_span_canonical(proj).transposed()};
    res.composition = std::move(comp);
  }
  return res;
}

}  // namespace quiltkit
