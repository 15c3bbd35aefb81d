#pragma once

#include <string>
#include <vector>

#include "quiltkit/matrix.hpp"

namespace quiltkit {

enum class Ring { Z, Z2 };

struct Generator {
  std::string name;
  int degree = 0;  // residue mod N
  bool operator==(const Generator& o) const {
    return name == o.name && degree == o.degree;
  }
};

/// Free Z_N-graded module over Z or Z/2. N is even so the parity
/// (-1)^{|x|} of a degree is well defined.
struct GradedModule {
  int modulus = 2;
  Ring ring = Ring::Z;
  std::vector<Generator> basis;

  void check() const {
    if (modulus <= 0 || modulus % 2 != 0)
      throw Error("ModulusMismatch", "grading modulus must be even and positive");
    for (size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].degree < 0 || basis[i].degree >= modulus)
        throw Error("ModulusMismatch", "degree not reduced mod N");
      for (size_t j = i + 1; j < basis.size(); ++j)
        if (basis[i].name == basis[j].name)
          throw Error("ModulusMismatch", "duplicate generator name " + basis[i].name);
    }
  }

  int size() const { return int(basis.size()); }
  bool operator==(const GradedModule& o) const {
    return modulus == o.modulus && ring == o.ring && basis == o.basis;
  }
  bool operator!=(const GradedModule& o) const { return !(*this == o); }
};

/// Rank-one module in degree zero; the unit for the tensor product.
inline GradedModule ground_module(int modulus, Ring ring) {
  return GradedModule{modulus, ring, {Generator{"1", 0}}};
}

inline int reduce_mod(int v, int n) { return ((v % n) + n) % n; }

/// Homogeneous map of graded modules. Entry (target row, source column)
/// vanishes unless |row| = |col| + degree mod N.
struct GradedMap {
  GradedModule source, target;
  int degree = 0;
  ZMat matrix;  // target.size() x source.size()

  GradedMap() = default;
  GradedMap(GradedModule src, GradedModule tgt, int deg, ZMat m)
      : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
    if (source.modulus != target.modulus || source.ring != target.ring)
      throw Error("ModulusMismatch", "map endpoints disagree on modulus or ring");
    degree = reduce_mod(deg, source.modulus);
    if (matrix.rows() != target.size() || matrix.cols() != source.size())
      throw Error("DimensionMismatch", "map matrix shape mismatch");
    normalize();
    for (int r = 0; r < matrix.rows(); ++r)
      for (int c = 0; c < matrix.cols(); ++c)
        if (matrix(r, c) != 0 &&
            reduce_mod(source.basis[c].degree + degree, source.modulus) !=
                target.basis[r].degree)
          throw Error("DimensionMismatch",
                      "nonzero entry off the homogeneous degree " +
                          std::to_string(degree));
  }

  void normalize() {
    if (source.ring == Ring::Z2)
      for (int r = 0; r < matrix.rows(); ++r)
        for (int c = 0; c < matrix.cols(); ++c)
          matrix(r, c) = ((matrix(r, c) % 2) + 2) % 2;
  }

  bool operator==(const GradedMap& o) const {
    return source == o.source && target == o.target && degree == o.degree &&
           matrix == o.matrix;
  }
};

inline GradedMap identity_map(const GradedModule& m) {
  return GradedMap(m, m, 0, ZMat::identity(m.size()));
}

inline GradedMap zero_map(const GradedModule& src, const GradedModule& tgt,
                          int degree) {
  return GradedMap(src, tgt, degree, ZMat(tgt.size(), src.size()));
}

inline GradedMap compose(const GradedMap& second, const GradedMap& first) {
  if (first.target != second.source)
    throw Error("DimensionMismatch", "composition endpoints do not match");
  return GradedMap(first.source, second.target, first.degree + second.degree,
                   second.matrix * first.matrix);
}

inline GradedMap add(const GradedMap& a, const GradedMap& b) {
  if (a.source != b.source || a.target != b.target || a.degree != b.degree)
    throw Error("DimensionMismatch", "sum of incompatible maps");
  return GradedMap(a.source, a.target, a.degree, a.matrix + b.matrix);
}

inline GradedMap negate(const GradedMap& a) {
  return GradedMap(a.source, a.target, a.degree, -a.matrix);
}

inline std::string tensor_name(const std::string& a, const std::string& b) {
  return a + "|" + b;
}

/// Basis of m1 (x) m2: ordered pairs with summed degrees, m1 index outer.
inline GradedModule tensor(const GradedModule& m1, const GradedModule& m2) {
  if (m1.modulus != m2.modulus || m1.ring != m2.ring)
    throw Error("ModulusMismatch", "tensor factors disagree on modulus or ring");
  GradedModule t{m1.modulus, m1.ring, {}};
  t.basis.reserve(size_t(m1.size()) * m2.size());
  for (const auto& x : m1.basis)
    for (const auto& y : m2.basis)
      t.basis.push_back(Generator{tensor_name(x.name, y.name),
                                  reduce_mod(x.degree + y.degree, m1.modulus)});
  return t;
}

inline GradedModule tensor_many(const std::vector<GradedModule>& ms, int modulus,
                                Ring ring) {
  GradedModule acc = ground_module(modulus, ring);
  bool first = true;
  for (const auto& m : ms) {
    if (first) {
      acc = m;
      first = false;
    } else {
      acc = tensor(acc, m);
    }
  }
  return acc;
}

/// Graded tensor of maps: (f1 (x) f2)(x1 (x) x2) = (-1)^{|f2||x1|} f1x1 (x) f2x2.
inline GradedMap tensor_map(const GradedMap& f1, const GradedMap& f2) {
  if (f1.source.modulus != f2.source.modulus || f1.source.ring != f2.source.ring)
    throw Error("ModulusMismatch", "tensor factors disagree on modulus or ring");
  GradedModule src = tensor(f1.source, f2.source);
  GradedModule tgt = tensor(f1.target, f2.target);
  ZMat m(tgt.size(), src.size());
  const int n2s = f2.source.size(), n2t = f2.target.size();
  for (int c1 = 0; c1 < f1.source.size(); ++c1) {
    int sgn = (f2.degree % 2) * (f1.source.basis[c1].degree % 2) % 2 ? -1 : 1;
    for (int c2 = 0; c2 < n2s; ++c2)
      for (int r1 = 0; r1 < f1.target.size(); ++r1) {
        if (f1.matrix(r1, c1) == 0) continue;
        for (int r2 = 0; r2 < n2t; ++r2) {
          if (f2.matrix(r2, c2) == 0) continue;
          m(r1 * n2t + r2, c1 * n2s + c2) =
              sgn * f1.matrix(r1, c1) * f2.matrix(r2, c2);
        }
      }
  }
  return GradedMap(src, tgt, f1.degree + f2.degree, std::move(m));
}

/// Degree-zero map T(inputs) -> T(outputs) permuting tensor factors with
/// Koszul signs; output slot o receives input factor out_from[o].
inline GradedMap koszul_permutation(const std::vector<GradedModule>& inputs,
                                    const std::vector<int>& out_from) {
  if (inputs.empty())
    throw Error("DimensionMismatch", "permutation of no factors");
  const int k = int(inputs.size());
  if (int(out_from.size()) != k)
    throw Error("DimensionMismatch", "permutation arity mismatch");
  const int modulus = inputs[0].modulus;
  const Ring ring = inputs[0].ring;
  std::vector<GradedModule> outputs;
  for (int o = 0; o < k; ++o) outputs.push_back(inputs[out_from[o]]);
  GradedModule src = tensor_many(inputs, modulus, ring);
  GradedModule tgt = tensor_many(outputs, modulus, ring);
  ZMat m(tgt.size(), src.size());
  // enumerate source basis tuples
  std::vector<int> idx(k, 0);
  std::vector<int> strides_src(k, 1), strides_tgt(k, 1);
  for (int i = k - 2; i >= 0; --i)
    strides_src[i] = strides_src[i + 1] * inputs[i + 1].size();
  for (int o = k - 2; o >= 0; --o)
    strides_tgt[o] = strides_tgt[o + 1] * outputs[o + 1].size();
  bool done = src.size() == 0;
  while (!done) {
    int col = 0, row = 0, sgn = 1;
    for (int i = 0; i < k; ++i) col += idx[i] * strides_src[i];
    for (int o = 0; o < k; ++o) row += idx[out_from[o]] * strides_tgt[o];
    for (int o1 = 0; o1 < k; ++o1)
      for (int o2 = o1 + 1; o2 < k; ++o2)
        if (out_from[o1] > out_from[o2] &&
            inputs[out_from[o1]].basis[idx[out_from[o1]]].degree % 2 &&
            inputs[out_from[o2]].basis[idx[out_from[o2]]].degree % 2)
          sgn = -sgn;
    m(row, col) = sgn;
    int i = k - 1;
    while (i >= 0 && ++idx[i] == inputs[i].size()) idx[i--] = 0;
    done = i < 0;
  }
  return GradedMap(src, tgt, 0, std::move(m));
}

/// Basis-wise duality between two modules: |x_i| + |x'_i| = half_dim mod N,
/// with the signs eps_i (+1 under the fixed convention).
struct DualityDatum {
  GradedModule first, second;
  std::vector<int> eps;
  int half_dim = 0;

  void check() const {
    if (first.modulus != second.modulus || first.ring != second.ring)
      throw Error("ModulusMismatch", "duality pair disagrees on modulus or ring");
    if (first.size() != second.size() || int(eps.size()) != first.size())
      throw Error("FactorMismatch", "duality pair sizes disagree");
    for (int i = 0; i < first.size(); ++i) {
      if (eps[i] != 1 && eps[i] != -1)
        throw Error("FactorMismatch", "eps entries must be +-1");
      if (reduce_mod(first.basis[i].degree + second.basis[i].degree,
                     first.modulus) != reduce_mod(half_dim, first.modulus))
        throw Error("FactorMismatch", "paired degrees do not sum to half_dim");
    }
  }
};

inline DualityDatum make_duality(GradedModule first, GradedModule second,
                                 int half_dim) {
  DualityDatum d;
  d.first = std::move(first);
  d.second = std::move(second);
  d.eps.assign(d.first.size(), 1);
  d.half_dim = half_dim;
  d.check();
  return d;
}

/// The pairing for the reversed ordered pair. Under the convention that the
/// given pair's signs are all +1, the reversed pair keeps +1 when half_dim
/// is odd but picks up (-1)^{|x'_i|} when half_dim is even.
inline DualityDatum reversed_duality(const DualityDatum& d) {
  DualityDatum r;
  r.first = d.second;
  r.second = d.first;
  r.half_dim = d.half_dim;
  r.eps.assign(r.first.size(), 1);
  if (d.half_dim % 2 == 0)
    for (int i = 0; i < r.first.size(); ++i)
      r.eps[i] = d.second.basis[i].degree % 2 ? -1 : 1;
  r.check();
  return r;
}

/// Pairing first (x) second -> ground of degree -half_dim:
/// x_i (x) x'_j |-> (-1)^{|x_i|} eps_i delta_ij.
inline GradedMap cap_map(const DualityDatum& d) {
  d.check();
  GradedModule src = tensor(d.first, d.second);
  GradedModule tgt = ground_module(d.first.modulus, d.first.ring);
  ZMat m(1, src.size());
  const int n2 = d.second.size();
  for (int i = 0; i < d.first.size(); ++i) {
    int sgn = d.first.basis[i].degree % 2 ? -1 : 1;
    m(0, i * n2 + i) = sgn * d.eps[i];
  }
  return GradedMap(src, tgt, -d.half_dim, std::move(m));
}

/// Copairing ground -> first (x) second of degree +half_dim:
/// 1 |-> sum_i eps_i x_i (x) x'_i.
inline GradedMap cup_map(const DualityDatum& d) {
  d.check();
  GradedModule src = ground_module(d.first.modulus, d.first.ring);
  GradedModule tgt = tensor(d.first, d.second);
  ZMat m(tgt.size(), 1);
  const int n2 = d.second.size();
  for (int i = 0; i < d.first.size(); ++i) m(i * n2 + i, 0) = d.eps[i];
  return GradedMap(src, tgt, d.half_dim, std::move(m));
}

/// Tr(f) = sum_i (-1)^{|x_i|} <f x_i, x_i> for a degree-zero endomorphism.
inline Int graded_trace(const GradedMap& f) {
  if (f.source != f.target)
    throw Error("NotEndomorphism", "graded trace needs source = target");
  if (f.degree != 0)
    throw Error("NonzeroDegree", "graded trace needs degree zero");
  Int t = 0;
  for (int i = 0; i < f.source.size(); ++i)
    t += (f.source.basis[i].degree % 2 ? -1 : 1) * f.matrix(i, i);
  if (f.source.ring == Ring::Z2) t = ((t % 2) + 2) % 2;
  return t;
}

inline Int scalar_value(const GradedMap& f) {
  if (f.source.size() != 1 || f.target.size() != 1)
    throw Error("DimensionMismatch", "not a scalar map");
  return f.matrix(0, 0);
}

/// (#even generators) - (#odd generators).
inline Int euler_characteristic(const GradedModule& m) {
  Int chi = 0;
  for (const auto& g : m.basis) chi += g.degree % 2 ? -1 : 1;
  return chi;
}

// identifications M ~ M (x) ground and back, both sign free
inline GradedMap unit_intro(const GradedModule& m) {
  GradedModule tgt = tensor(m, ground_module(m.modulus, m.ring));
  return GradedMap(m, tgt, 0, ZMat::identity(m.size()));
}
inline GradedMap unit_elim(const GradedModule& m) {
  GradedModule src = tensor(m, ground_module(m.modulus, m.ring));
  return GradedMap(src, m, 0, ZMat::identity(m.size()));
}

/// Closes the source factor at pos_minus against the target factor at
/// pos_plus: the composite
///   (Id (x) cap) o (Psi_+ (x) Id) o (f (x) Id) o (Psi_- (x) Id) o (Id (x) cup)
/// with all Koszul signs carried by the graded tensor. Preserves degree.
inline GradedMap algebraic_trace(const GradedMap& f,
                                 std::vector<GradedModule> src_factors,
                                 std::vector<GradedModule> tgt_factors,
                                 int pos_minus, int pos_plus,
                                 const DualityDatum& d) {
  d.check();
  const int modulus = d.first.modulus;
  const Ring ring = d.first.ring;
  if (pos_minus < 0 || pos_minus >= int(src_factors.size()) || pos_plus < 0 ||
      pos_plus >= int(tgt_factors.size()))
    throw Error("FactorMismatch", "trace position out of range");
  if (src_factors[pos_minus] != d.first)
    throw Error("FactorMismatch", "source factor does not match duality datum");
  if (tgt_factors[pos_plus] != d.first)
    throw Error("FactorMismatch", "target factor does not match duality datum");
  if (f.source != tensor_many(src_factors, modulus, ring) ||
      f.target != tensor_many(tgt_factors, modulus, ring))
    throw Error("FactorMismatch", "map endpoints do not match the factor lists");

  std::vector<GradedModule> src_rest;
  for (int i = 0; i < int(src_factors.size()); ++i)
    if (i != pos_minus) src_rest.push_back(src_factors[i]);
  std::vector<GradedModule> tgt_rest;
  for (int i = 0; i < int(tgt_factors.size()); ++i)
    if (i != pos_plus) tgt_rest.push_back(tgt_factors[i]);

  GradedModule rest_src = tensor_many(src_rest, modulus, ring);
  GradedModule rest_tgt = tensor_many(tgt_rest, modulus, ring);

  // 1: rest -> rest (x) (A (x) B)
  GradedMap stage1 =
      compose(tensor_map(identity_map(rest_src), cup_map(d)), unit_intro(rest_src));
  // 2: (rest (x) A) (x) B -> T(src) (x) B   moving A into slot pos_minus
  std::vector<GradedModule> perm_in = src_rest;
  perm_in.push_back(d.first);
  std::vector<int> out_from;
  {
    int rest_i = 0;
    for (int o = 0; o < int(src_factors.size()); ++o)
      out_from.push_back(o == pos_minus ? int(perm_in.size()) - 1 : rest_i++);
  }
  GradedMap stage2 = tensor_map(koszul_permutation(perm_in, out_from),
                                identity_map(d.second));
  // tensor_many(rest + [A]) and tensor(rest, A) have equal bases by
  // construction, so stage1/stage2 compose directly.
  GradedMap stage2_adj(stage1.target, stage2.target, stage2.degree, stage2.matrix);

  // 3: f (x) Id_B
  GradedMap stage3 = tensor_map(f, identity_map(d.second));
  GradedMap stage3_adj(stage2_adj.target, stage3.target, stage3.degree, stage3.matrix);

  // 4: T(tgt) (x) B -> (rest_tgt (x) A) (x) B   moving slot pos_plus last
  std::vector<int> out_from2;
  for (int i = 0; i < int(tgt_factors.size()); ++i)
    if (i != pos_plus) out_from2.push_back(i);
  out_from2.push_back(pos_plus);
  GradedMap stage4 = tensor_map(koszul_permutation(tgt_factors, out_from2),
                                identity_map(d.second));
  GradedMap stage4_adj(stage3_adj.target, stage4.target, stage4.degree, stage4.matrix);

  // 5: rest_tgt (x) (A (x) B) -> rest_tgt
  GradedMap stage5 = compose(unit_elim(rest_tgt),
                             tensor_map(identity_map(rest_tgt), cap_map(d)));
  GradedMap stage5_adj(stage4_adj.target, stage5.target, stage5.degree, stage5.matrix);

  return compose(stage5_adj, compose(stage4_adj, compose(stage3_adj, compose(stage2_adj, stage1))));
}

struct CohomologyGroup {
  int degree = 0;
  int free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1, over Z only
};

/// Z_N-graded chain complex with a degree +1 differential (cyclic mod N).
struct ChainComplex {
  GradedModule module;
  GradedMap differential;

  void check() const {
    module.check();
    if (differential.source != module || differential.target != module)
      throw Error("NotAComplex", "differential endpoints must be the module");
    if (differential.degree != 1)
      throw Error("NotAComplex", "differential must have degree +1");
    if (!(differential.matrix * differential.matrix).is_zero())
      throw Error("NotAComplex", "d^2 != 0");
  }
};

/// Cohomology per degree via Smith normal form over Z (free ranks and
/// torsion coefficients) or Gaussian elimination over Z/2 (ranks only).
inline std::vector<CohomologyGroup> cohomology(const ChainComplex& c) {
  c.check();
  const int n = c.module.modulus;
  std::vector<std::vector<int>> by_deg(n);
  for (int i = 0; i < c.module.size(); ++i)
    by_deg[c.module.basis[i].degree].push_back(i);
  auto block = [&](int from_deg) {
    const auto& src = by_deg[from_deg];
    const auto& tgt = by_deg[(from_deg + 1) % n];
    ZMat b(int(tgt.size()), int(src.size()));
    for (int r = 0; r < b.rows(); ++r)
      for (int cc = 0; cc < b.cols(); ++cc)
        b(r, cc) = c.differential.matrix(tgt[r], src[cc]);
    return b;
  };
  std::vector<CohomologyGroup> out;
  for (int k = 0; k < n; ++k) {
    CohomologyGroup g;
    g.degree = k;
    ZMat dk = block(k);
    ZMat dprev = block((k - 1 + n) % n);
    if (c.module.ring == Ring::Z2) {
      int rk = rank_mod2(dk), rprev = rank_mod2(dprev);
      g.free_rank = int(by_deg[k].size()) - rk - rprev;
    } else {
      SmithForm sk = smith_normal_form(dk);
      SmithForm sprev = smith_normal_form(dprev);
      g.free_rank = int(by_deg[k].size()) - sk.rank() - sprev.rank();
      for (const Int& d : sprev.invariant_factors)
        if (d > 1) g.torsion.push_back(d);
    }
    out.push_back(std::move(g));
  }
  return out;
}

inline bool is_chain_map(const ChainComplex& a, const ChainComplex& b,
                         const GradedMap& f) {
  if (f.source != a.module || f.target != b.module) return false;
  return (b.differential.matrix * f.matrix) == (f.matrix * a.differential.matrix);
}

}  // namespace quiltkit
