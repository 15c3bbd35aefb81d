#pragma once

#include <vector>

#include "quiltkit/symplectic.hpp"

namespace quiltkit {

/// Triple index of three Lagrangian subspaces of one space: the signature
/// of Q(x1,x2,x3) = w(x1,x2) + w(x2,x3) + w(x3,x1) on L1 + L2 + L3,
/// computed by exact congruence diagonalization. Degenerate triples are
/// allowed; the answer is rank_+ - rank_-.
inline int kashiwara_index(const LagrangianSubspace& l1,
                           const LagrangianSubspace& l2,
                           const LagrangianSubspace& l3) {
  if (l1.space != l2.space || l2.space != l3.space)
    throw Error("SpaceMismatch", "triple index needs one common space");
  const QMat& f = l1.space.form;
  const int k1 = l1.basis.cols(), k2 = l2.basis.cols(), k3 = l3.basis.cols();
  QMat g12 = l1.basis.transposed() * f * l2.basis;
  QMat g23 = l2.basis.transposed() * f * l3.basis;
  QMat g31 = l3.basis.transposed() * f * l1.basis;
  // 2B, the polarization of Q doubled to avoid denominators
  QMat s(k1 + k2 + k3, k1 + k2 + k3);
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j) {
      s(i, k1 + j) += g12(i, j);
      s(k1 + j, i) += g12(i, j);
    }
  for (int i = 0; i < k2; ++i)
    for (int j = 0; j < k3; ++j) {
      s(k1 + i, k1 + k2 + j) += g23(i, j);
      s(k1 + k2 + j, k1 + i) += g23(i, j);
    }
  for (int i = 0; i < k3; ++i)
    for (int j = 0; j < k1; ++j) {
      s(k1 + k2 + i, j) += g31(i, j);
      s(j, k1 + k2 + i) += g31(i, j);
    }
  return symmetric_signature(s).value();
}

/// Finite cyclic sequence of Lagrangian subspaces of one space, standing in
/// for a loop in the Lagrangian Grassmannian.
struct LagrangianLoop {
  SymplecticSpace space;
  std::vector<LagrangianSubspace> samples;

  void check() const {
    if (samples.empty())
      throw Error("DimensionMismatch", "loop needs at least one sample");
    for (const auto& s : samples)
      if (s.space != space) throw Error("SpaceMismatch", "sample in wrong space");
  }
};

/// Sum of triple indices around the loop; the loop index is half of this.
inline long long maslov_sum(const LagrangianLoop& loop,
                            const LagrangianSubspace& reference) {
  loop.check();
  if (reference.space != loop.space)
    throw Error("SpaceMismatch", "reference in wrong space");
  long long sum = 0;
  const int n = int(loop.samples.size());
  for (int i = 0; i < n; ++i)
    sum += kashiwara_index(reference, loop.samples[i], loop.samples[(i + 1) % n]);
  return sum;
}

/// Loop Maslov index: half the cyclic sum of triple indices against any
/// reference; reference independence is the cocycle identity. The fixed
/// sign convention gives the positive half-turn loop in standard_space(1)
/// index +1. A non-integral half-sum means the samples are too coarse to
/// pin a loop class and raises NonIntegralIndex.
inline int maslov_loop(const LagrangianLoop& loop,
                       const LagrangianSubspace& reference) {
  long long sum = maslov_sum(loop, reference);
  if (sum % 2 != 0)
    throw Error("NonIntegralIndex", "half-sum of triple indices is not an integer");
  return int(sum / 2);
}

struct BoundaryDatum {
  LagrangianLoop loop;
  bool oriented = false;
};

/// Oriented boundary data must have even loop index.
inline bool loop_parity_check(const BoundaryDatum& datum,
                              const LagrangianSubspace& reference) {
  if (!datum.oriented) return true;
  return maslov_loop(datum.loop, reference) % 2 == 0;
}

struct SurfaceIndexData {
  int rank = 1;
  int euler = 0;
  int deg_closed = 0;
  std::vector<int> boundary_indices;
  std::vector<int> seam_indices;
};

/// deg(E|closed part) + sum of boundary and seam Maslov indices.
inline int topological_index(const SurfaceIndexData& data) {
  int s = data.deg_closed;
  for (int v : data.boundary_indices) s += v;
  for (int v : data.seam_indices) s += v;
  return s;
}

inline int fredholm_index(int rank, int euler, int top_index) {
  return rank * euler + top_index;
}

inline int fredholm_index_quilt(const std::vector<std::pair<int, int>>& per_patch,
                                int top_index) {
  int s = top_index;
  for (const auto& [rank, euler] : per_patch) s += rank * euler;
  return s;
}

}  // namespace quiltkit
