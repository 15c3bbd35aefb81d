#pragma once

#include <memory>

#include "quiltkit/graded.hpp"
#include "quiltkit/quilt.hpp"

namespace quiltkit {

// ---------------------------------------------------------------------------
// generator assignments

/// Maps assigned to generator quilts, keyed by combinatorial type, together
/// with the modules carried by quilted ends (keyed by the end's label
/// sequence) and the duality data used to close ends against each other.
struct GeneratorAssignment {
  std::map<std::string, GradedMap> maps;
  std::map<std::string, int> degree_offsets;
  std::map<std::string, GradedModule> end_modules;
  std::map<std::string, DualityDatum> dualities;

  void register_end_module(const std::string& key, GradedModule m) {
    end_modules.emplace(key, std::move(m));
  }
  void register_duality(const std::string& key, DualityDatum d) {
    d.check();
    dualities.emplace(key, std::move(d));
  }

  /// Registers a generator map; its degree must be the quilt's degree shift
  /// plus the bookkeeping offset, and its endpoints must factor through the
  /// registered end modules.
  void assign(const QuiltedSurface& q, GradedMap f, int offset = 0);
};

inline bool verify_assignment(const QuiltedSurface& q, const GradedMap& f,
                              int offset = 0) {
  return f.degree == reduce_mod(degree_shift(q) + offset, q.modulus);
}

namespace detail {

inline std::vector<GradedModule> end_factors(const QuiltedSurface& q,
                                             const Ends& ends, bool incoming,
                                             const GeneratorAssignment& a,
                                             std::vector<std::string>* keys) {
  std::vector<GradedModule> out;
  for (const auto& e : incoming ? ends.incoming : ends.outgoing) {
    auto it = a.end_modules.find(e.key());
    if (it == a.end_modules.end())
      throw Error("UnassignedGenerator", "no module for end " + e.key());
    out.push_back(it->second);
    if (keys) keys->push_back(e.key());
  }
  return out;
}

}  // namespace detail

inline void GeneratorAssignment::assign(const QuiltedSurface& q, GradedMap f,
                                        int offset) {
  if (!verify_assignment(q, f, offset))
    throw Error("DegreeSoundness",
                "assigned map degree disagrees with the quilt degree shift");
  Ends ends = extract_ends(q);
  auto in = detail::end_factors(q, ends, true, *this, nullptr);
  auto out = detail::end_factors(q, ends, false, *this, nullptr);
  if (f.source != tensor_many(in, q.modulus, f.source.ring) ||
      f.target != tensor_many(out, q.modulus, f.source.ring))
    throw Error("FactorMismatch",
                "assigned map does not factor through the end modules");
  std::string type = combinatorial_type(q);
  maps.insert_or_assign(type, std::move(f));
  degree_offsets.insert_or_assign(type, offset);
}

// ---------------------------------------------------------------------------
// expressions and evaluation

struct QuiltExpression {
  enum class Op { Leaf, Union, Glue };
  Op op = Op::Leaf;
  std::string fixture;
  std::shared_ptr<QuiltExpression> left, right, child;
  EndRef minus, plus;

  static QuiltExpression leaf(std::string name) {
    QuiltExpression e;
    e.op = Op::Leaf;
    e.fixture = std::move(name);
    return e;
  }
  static QuiltExpression unite(QuiltExpression a, QuiltExpression b) {
    QuiltExpression e;
    e.op = Op::Union;
    e.left = std::make_shared<QuiltExpression>(std::move(a));
    e.right = std::make_shared<QuiltExpression>(std::move(b));
    return e;
  }
  static QuiltExpression glue_ends(QuiltExpression c, EndRef m, EndRef p) {
    QuiltExpression e;
    e.op = Op::Glue;
    e.child = std::make_shared<QuiltExpression>(std::move(c));
    e.minus = std::move(m);
    e.plus = std::move(p);
    return e;
  }
};

struct EvaluationResult {
  GradedMap map;
  bool sign_exact = true;
  QuiltedSurface quilt;
  std::vector<GradedModule> in_factors, out_factors;
  std::vector<std::string> in_keys, out_keys;
  int offset_total = 0;
};

using FixtureMap = std::map<std::string, QuiltedSurface>;

namespace detail {

inline GradedMap diagonal_sign_map(const std::vector<GradedModule>& factors,
                                   int modulus, Ring ring,
                                   const std::function<int(const std::vector<int>&)>& parity) {
  GradedModule m = tensor_many(factors, modulus, ring);
  ZMat d(m.size(), m.size());
  std::vector<int> idx(factors.size(), 0);
  int total = m.size();
  for (int flat = 0; flat < total; ++flat) {
    std::vector<int> degs;
    for (size_t i = 0; i < factors.size(); ++i)
      degs.push_back(factors[i].basis[idx[i]].degree);
    d(flat, flat) = parity(degs) % 2 ? -1 : 1;
    int i = int(factors.size()) - 1;
    while (i >= 0 && ++idx[i] == factors[i].size()) idx[i--] = 0;
  }
  if (total == 0 || factors.empty()) d = ZMat::identity(m.size());
  return GradedMap(m, m, 0, std::move(d));
}

}  // namespace detail

inline EvaluationResult evaluate(const QuiltExpression& expr,
                                 const FixtureMap& fixtures,
                                 const GeneratorAssignment& a) {
  switch (expr.op) {
    case QuiltExpression::Op::Leaf: {
      auto it = fixtures.find(expr.fixture);
      if (it == fixtures.end())
        throw Error("UnassignedGenerator", "unknown fixture " + expr.fixture);
      EvaluationResult res;
      res.quilt = it->second;
      std::string type = combinatorial_type(res.quilt);
      auto mit = a.maps.find(type);
      if (mit == a.maps.end())
        throw Error("UnassignedGenerator",
                    "no map assigned to the type of " + expr.fixture);
      res.map = mit->second;
      res.offset_total = a.degree_offsets.count(type) ? a.degree_offsets.at(type) : 0;
      Ends ends = extract_ends(res.quilt);
      res.in_factors = detail::end_factors(res.quilt, ends, true, a, &res.in_keys);
      res.out_factors = detail::end_factors(res.quilt, ends, false, a, &res.out_keys);
      if (res.map.source !=
              tensor_many(res.in_factors, res.quilt.modulus, res.map.source.ring) ||
          res.map.target !=
              tensor_many(res.out_factors, res.quilt.modulus, res.map.source.ring))
        throw Error("FactorMismatch",
                    "assigned map does not factor through the end modules");
      return res;
    }
    case QuiltExpression::Op::Union: {
      EvaluationResult l = evaluate(*expr.left, fixtures, a);
      EvaluationResult r = evaluate(*expr.right, fixtures, a);
      EvaluationResult res;
      res.quilt = disjoint_union(l.quilt, r.quilt);
      GradedMap t = tensor_map(l.map, r.map);
      res.sign_exact = l.sign_exact && r.sign_exact;
      res.offset_total = l.offset_total + r.offset_total;
      res.in_factors = l.in_factors;
      res.in_factors.insert(res.in_factors.end(), r.in_factors.begin(),
                            r.in_factors.end());
      res.out_factors = l.out_factors;
      res.out_factors.insert(res.out_factors.end(), r.out_factors.begin(),
                             r.out_factors.end());
      res.in_keys = l.in_keys;
      res.in_keys.insert(res.in_keys.end(), r.in_keys.begin(), r.in_keys.end());
      res.out_keys = l.out_keys;
      res.out_keys.insert(res.out_keys.end(), r.out_keys.begin(), r.out_keys.end());
      // drop spurious unit factors: rebind to the canonical tensor modules
      int modulus = res.quilt.modulus;
      Ring ring = t.source.ring;
      res.map = GradedMap(tensor_many(res.in_factors, modulus, ring),
                          tensor_many(res.out_factors, modulus, ring), t.degree,
                          t.matrix);
      return res;
    }
    case QuiltExpression::Op::Glue:
      break;
  }

  EvaluationResult child = evaluate(*expr.child, fixtures, a);
  int pos_minus = -1, pos_plus = -1;
  for (int i = 0; i < int(child.quilt.incoming.size()); ++i)
    if (child.quilt.incoming[i] == expr.minus) pos_minus = i;
  for (int i = 0; i < int(child.quilt.outgoing.size()); ++i)
    if (child.quilt.outgoing[i] == expr.plus) pos_plus = i;
  if (pos_minus < 0 || pos_plus < 0)
    throw Error("EndMismatch", "glue references do not name listed ends");

  QuiltedSurface glued = glue(child.quilt, expr.minus, expr.plus);

  // half-dimension along the glued end, for duality checks and signs
  int half_n = 0;
  {
    Ends ends = extract_ends(child.quilt);
    for (const auto& e : ends.incoming)
      if (e.order_ref == expr.minus)
        for (int d : e.patch_dims) half_n += d / 2;
  }

  EvaluationResult res;
  res.quilt = glued;
  res.sign_exact = child.sign_exact;
  res.offset_total = child.offset_total;
  for (int i = 0; i < int(child.in_factors.size()); ++i)
    if (i != pos_minus) {
      res.in_factors.push_back(child.in_factors[i]);
      res.in_keys.push_back(child.in_keys[i]);
    }
  for (int i = 0; i < int(child.out_factors.size()); ++i)
    if (i != pos_plus) {
      res.out_factors.push_back(child.out_factors[i]);
      res.out_keys.push_back(child.out_keys[i]);
    }

  // exact composition formula when gluing a single-outgoing-end component
  // into the last incoming end of the other component of a disjoint union
  if (expr.child->op == QuiltExpression::Op::Union) {
    EvaluationResult s0 = evaluate(*expr.child->left, fixtures, a);
    EvaluationResult s1 = evaluate(*expr.child->right, fixtures, a);
    bool fits = pos_minus == int(s0.in_factors.size()) - 1 &&
                s1.out_factors.size() == 1 &&
                pos_plus == int(s0.out_factors.size());
    if (fits) {
      std::vector<GradedModule> left_rest(s0.in_factors.begin(),
                                          s0.in_factors.end() - 1);
      int modulus = glued.modulus;
      Ring ring = s0.map.source.ring;
      GradedMap padded = tensor_map(
          identity_map(tensor_many(left_rest, modulus, ring)), s1.map);
      // rebind away unit factors introduced by empty factor lists
      std::vector<GradedModule> src_list = left_rest;
      src_list.insert(src_list.end(), s1.in_factors.begin(), s1.in_factors.end());
      padded = GradedMap(tensor_many(src_list, modulus, ring), s0.map.source,
                         padded.degree, padded.matrix);
      GradedMap value = compose(s0.map, padded);
      int b1 = 0;
      for (const auto& p : s1.quilt.patches) b1 += int(p.circles.size());
      if (half_n % 2 != 0 && b1 % 2 == 0) {
        // per-basis sign (-1)^{n (b1+1) sum (n - |x_e|)} over the retained
        // incoming factors of the left component
        int nleft = int(left_rest.size());
        std::vector<GradedModule> all = left_rest;
        all.insert(all.end(), s1.in_factors.begin(), s1.in_factors.end());
        GradedMap sign = detail::diagonal_sign_map(
            all, modulus, ring, [&](const std::vector<int>& degs) {
              long long s = 0;
              for (int i = 0; i < nleft; ++i) s += half_n - degs[i];
              return int(((half_n * (b1 + 1) % 2) * (s % 2) % 2 + 2) % 2);
            });
        value = compose(value, sign);
      }
      res.map = value;
      res.sign_exact = s0.sign_exact && s1.sign_exact;
      if (res.offset_total == 0 &&
          res.map.degree != degree_shift(res.quilt))
        throw Error("DegreeSoundness", "evaluated degree mismatch");
      return res;
    }
  }

  auto dit = a.dualities.find(child.in_keys[pos_minus]);
  if (dit == a.dualities.end())
    throw Error("UnassignedGenerator",
                "no duality datum for end " + child.in_keys[pos_minus]);
  const DualityDatum& d = dit->second;
  if (reduce_mod(d.half_dim, glued.modulus) != reduce_mod(half_n, glued.modulus))
    throw Error("FactorMismatch",
                "duality half dimension disagrees with the glued end");

  res.map = algebraic_trace(child.map, child.in_factors, child.out_factors,
                            pos_minus, pos_plus, d);

  // configurations with an exact sign: a connected surface closing its only
  // incoming end against its only outgoing end, and any gluing over even n
  // when no seams are present (the universal sign enters as a 2n-th power)
  bool fglue3 = connected(child.quilt) && child.in_factors.size() == 1 &&
                child.out_factors.size() == 1;
  bool even_unquilted = child.quilt.seams.empty() && half_n % 2 == 0;
  if (!(fglue3 || even_unquilted)) res.sign_exact = false;

  if (res.offset_total == 0 && res.map.degree != degree_shift(res.quilt))
    throw Error("DegreeSoundness", "evaluated degree mismatch");
  return res;
}

// ---------------------------------------------------------------------------

/// Invariant of the sphere with g+1 boundary circles all carrying one label:
/// the graded trace of the (g-1)-st power of the one-holed-strip map.
inline Int sphere_with_holes(int g, const GradedMap& phi) {
  if (g < 1) throw Error("NotEndomorphism", "needs g >= 1");
  if (phi.source != phi.target)
    throw Error("NotEndomorphism", "needs an endomorphism");
  if (phi.degree != 0) throw Error("NonzeroDegree", "needs degree zero");
  GradedMap power = identity_map(phi.source);
  for (int i = 0; i < g - 1; ++i) power = compose(phi, power);
  return graded_trace(power);
}

struct ShrinkTransport {
  QuiltedSurface quilt;
  ShiftRecord shift;
  GeneratorAssignment assignment;
  int expected_degree = 0;  // of the shrunk quilt's invariant
};

/// Shrinks the strip and carries the generator assignment across: the end
/// modules transport identically (new end keys, same modules) and the
/// expected degree moves by the shift record.
inline ShrinkTransport shrink_transport(const QuiltedSurface& q,
                                        const std::string& patch,
                                        const GeneratorAssignment& a) {
  std::string type = combinatorial_type(q);
  auto mit = a.maps.find(type);
  if (mit == a.maps.end())
    throw Error("UnassignedGenerator", "no map assigned to the quilt");
  ShrinkTransport out;
  auto [shrunk, shift] = shrink_strip(q, patch);
  out.quilt = shrunk;
  out.shift = shift;
  out.assignment = a;
  // identify end modules across the shrink, position by position
  Ends before = extract_ends(q);
  Ends after = extract_ends(shrunk);
  bool all_survive = true;
  auto carry = [&](const std::vector<QuiltedEnd>& olds,
                   const std::vector<QuiltedEnd>& news) {
    if (olds.size() != news.size()) all_survive = false;
    size_t i = 0;
    for (size_t j = 0; j < olds.size() && i < news.size(); ++j) {
      bool survives = olds[j].cylindrical;
      for (const auto& s : olds[j].strips)
        if (s.patch != patch) survives = true;
      if (!survives) continue;
      auto it = a.end_modules.find(olds[j].key());
      if (it != a.end_modules.end())
        out.assignment.register_end_module(news[i].key(), it->second);
      auto dt = a.dualities.find(olds[j].key());
      if (dt != a.dualities.end())
        out.assignment.register_duality(news[i].key(), dt->second);
      ++i;
    }
  };
  carry(before.incoming, after.incoming);
  carry(before.outgoing, after.outgoing);
  out.expected_degree =
      reduce_mod(mit->second.degree - shift.n * shift.d, q.modulus);
  // when every end survives the map transports across the identity
  // identification of the chain groups; otherwise only the degree
  // bookkeeping is carried
  if (all_survive)
    out.assignment.assign(shrunk, mit->second, shift.n * shift.d);
  return out;
}

// ---------------------------------------------------------------------------
// fixtures

namespace fixtures {

/// Disk with one incoming and one outgoing boundary puncture.
inline QuiltedSurface strip(int N, int dim, const std::string& l0,
                            const std::string& l1, const std::string& m = "M") {
  QuiltedSurface q;
  q.modulus = N;
  Patch p;
  p.id = "P";
  p.label = {m, dim};
  p.circles.push_back({"c",
                       {MarkedPoint{"in", Direction::Incoming, 1},
                        MarkedPoint{"out", Direction::Outgoing, 1}}});
  q.patches.push_back(p);
  q.boundary_labels.push_back({CompRef{"P", "c", 0}, l0, dim});
  q.boundary_labels.push_back({CompRef{"P", "c", 1}, l1, dim});
  q.incoming.push_back({"P", "in"});
  q.outgoing.push_back({"P", "out"});
  return q;
}

/// Disk with two incoming boundary punctures (the pairing).
inline QuiltedSurface cap(int N, int dim, const std::string& l0,
                          const std::string& l1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch p;
  p.id = "P";
  p.label = {"M", dim};
  p.circles.push_back({"c",
                       {MarkedPoint{"x", Direction::Incoming, 1},
                        MarkedPoint{"y", Direction::Incoming, 1}}});
  q.patches.push_back(p);
  q.boundary_labels.push_back({CompRef{"P", "c", 0}, l0, dim});
  q.boundary_labels.push_back({CompRef{"P", "c", 1}, l1, dim});
  q.incoming.push_back({"P", "x"});
  q.incoming.push_back({"P", "y"});
  return q;
}

/// Disk with two outgoing boundary punctures (the copairing).
inline QuiltedSurface cup(int N, int dim, const std::string& l0,
                          const std::string& l1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch p;
  p.id = "P";
  p.label = {"M", dim};
  p.circles.push_back({"c",
                       {MarkedPoint{"x", Direction::Outgoing, 1},
                        MarkedPoint{"y", Direction::Outgoing, 1}}});
  q.patches.push_back(p);
  q.boundary_labels.push_back({CompRef{"P", "c", 0}, l1, dim});
  q.boundary_labels.push_back({CompRef{"P", "c", 1}, l0, dim});
  q.incoming.clear();
  q.outgoing.push_back({"P", "x"});
  q.outgoing.push_back({"P", "y"});
  return q;
}

/// Closed disk with one labeled boundary circle; its invariant vanishes.
inline QuiltedSurface disk(int N, int dim, const std::string& l) {
  QuiltedSurface q;
  q.modulus = N;
  Patch p;
  p.id = "P";
  p.label = {"M", dim};
  p.circles.push_back({"c", {}});
  q.patches.push_back(p);
  q.boundary_labels.push_back({CompRef{"P", "c", 0}, l, dim});
  return q;
}

/// Quilted cylinder: two disks with an interior puncture each, boundaries
/// seamed together; incoming cylindrical end on the source patch.
inline QuiltedSurface phi_cylinder(int N, int d0, int d1,
                                   const std::string& label = "L01",
                                   const std::string& m0 = "M0",
                                   const std::string& m1 = "M1") {
  QuiltedSurface q;
  q.modulus = N;
  Patch p0;
  p0.id = "P0";
  p0.label = {m0, d0};
  p0.circles.push_back({"c", {}});
  p0.punctures.push_back({"z", Direction::Incoming});
  Patch p1;
  p1.id = "P1";
  p1.label = {m1, d1};
  p1.circles.push_back({"c", {}});
  p1.punctures.push_back({"w", Direction::Outgoing});
  q.patches = {p0, p1};
  q.seams.push_back({CompRef{"P0", "c", 0}, CompRef{"P1", "c", 0},
                     SeamLabel{label, false, {d0, d1}}});
  q.incoming.push_back({"P0", "z"});
  q.outgoing.push_back({"P1", "w"});
  return q;
}

/// Ring-morphism half: disk over M0 with an interior incoming end and a
/// boundary outgoing end, seamed to a disk over M1 with one boundary
/// outgoing end.
inline QuiltedSurface psi_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch p0;
  p0.id = "P0";
  p0.label = {"M0", d0};
  p0.circles.push_back({"c", {MarkedPoint{"a", Direction::Outgoing, 1}}});
  p0.punctures.push_back({"z", Direction::Incoming});
  Patch p1;
  p1.id = "P1";
  p1.label = {"M1", d1};
  p1.circles.push_back({"c", {MarkedPoint{"b", Direction::Outgoing, 1}}});
  q.patches = {p0, p1};
  q.seams.push_back({CompRef{"P0", "c", 0}, CompRef{"P1", "c", 0},
                     SeamLabel{"L01", false, {d0, d1}}});
  q.incoming.push_back({"P0", "z"});
  q.outgoing.push_back({"P0", "a"});
  return q;
}

/// The same with source and target swapped.
inline QuiltedSurface theta_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch p0;
  p0.id = "Q0";
  p0.label = {"M0", d0};
  p0.circles.push_back({"c", {MarkedPoint{"a", Direction::Incoming, 1}}});
  Patch p1;
  p1.id = "Q1";
  p1.label = {"M1", d1};
  p1.circles.push_back({"c", {MarkedPoint{"b", Direction::Incoming, 1}}});
  p1.punctures.push_back({"w", Direction::Outgoing});
  q.patches = {p0, p1};
  q.seams.push_back({CompRef{"Q0", "c", 0}, CompRef{"Q1", "c", 0},
                     SeamLabel{"L01", false, {d0, d1}}});
  q.incoming.push_back({"Q0", "a"});
  q.outgoing.push_back({"Q1", "w"});
  return q;
}

/// Quilted pair of pants: two triple-punctured disks with all three
/// boundary interval pairs seamed.
inline QuiltedSurface pop_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch pa;
  pa.id = "A";
  pa.label = {"M0", d0};
  pa.circles.push_back({"c",
                        {MarkedPoint{"a0", Direction::Incoming, 1},
                         MarkedPoint{"a1", Direction::Incoming, 1},
                         MarkedPoint{"a2", Direction::Outgoing, 1}}});
  Patch pb;
  pb.id = "B";
  pb.label = {"M1", d1};
  pb.circles.push_back({"c",
                        {MarkedPoint{"b0", Direction::Incoming, 1},
                         MarkedPoint{"b1", Direction::Incoming, 1},
                         MarkedPoint{"b2", Direction::Outgoing, 1}}});
  q.patches = {pa, pb};
  q.seams.push_back({CompRef{"A", "c", 0}, CompRef{"B", "c", 0},
                     SeamLabel{"L01", false, {d0, d1}}});
  q.seams.push_back({CompRef{"A", "c", 1}, CompRef{"B", "c", 2},
                     SeamLabel{"L01", false, {d0, d1}}});
  q.seams.push_back({CompRef{"A", "c", 2}, CompRef{"B", "c", 1},
                     SeamLabel{"L01", false, {d0, d1}}});
  q.incoming.push_back({"A", "a0"});
  q.incoming.push_back({"A", "a1"});
  q.outgoing.push_back({"A", "a2"});
  return q;
}

/// Composite pair of pants: one M1 disk with four boundary punctures and an
/// outgoing interior end, seamed to two M0 lenses with two punctures each.
inline QuiltedSurface s3comp_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch c;
  c.id = "C";
  c.label = {"M1", d1};
  c.circles.push_back({"c",
                       {MarkedPoint{"c1", Direction::Incoming, 1},
                        MarkedPoint{"c2", Direction::Incoming, 1},
                        MarkedPoint{"c3", Direction::Incoming, 1},
                        MarkedPoint{"c4", Direction::Incoming, 1}}});
  c.punctures.push_back({"w", Direction::Outgoing});
  Patch d1p;
  d1p.id = "D1";
  d1p.label = {"M0", d0};
  d1p.circles.push_back({"c",
                         {MarkedPoint{"d1", Direction::Incoming, 1},
                          MarkedPoint{"d2", Direction::Incoming, 1}}});
  Patch d2p;
  d2p.id = "D2";
  d2p.label = {"M0", d0};
  d2p.circles.push_back({"c",
                         {MarkedPoint{"e1", Direction::Incoming, 1},
                          MarkedPoint{"e2", Direction::Incoming, 1}}});
  q.patches = {c, d1p, d2p};
  auto lab = SeamLabel{"L01", false, {d0, d1}};
  q.seams.push_back({CompRef{"D1", "c", 1}, CompRef{"C", "c", 0}, lab});
  q.seams.push_back({CompRef{"D1", "c", 0}, CompRef{"C", "c", 1}, lab});
  q.seams.push_back({CompRef{"D2", "c", 1}, CompRef{"C", "c", 2}, lab});
  q.seams.push_back({CompRef{"D2", "c", 0}, CompRef{"C", "c", 3}, lab});
  q.incoming.push_back({"D1", "d2"});  // x
  q.incoming.push_back({"C", "c1"});   // middle
  q.incoming.push_back({"D2", "e2"});  // y
  q.outgoing.push_back({"C", "w"});
  return q;
}

/// Defect generator: an M1 strip joining two one-punctured M0 disks; one
/// outgoing cyclic end of length four.
inline QuiltedSurface s1_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch f;
  f.id = "F";
  f.label = {"M1", d1};
  f.circles.push_back({"c",
                       {MarkedPoint{"f1", Direction::Outgoing, 1},
                        MarkedPoint{"f2", Direction::Outgoing, 1}}});
  Patch e1;
  e1.id = "E1";
  e1.label = {"M0", d0};
  e1.circles.push_back({"c", {MarkedPoint{"g", Direction::Outgoing, 1}}});
  Patch e2;
  e2.id = "E2";
  e2.label = {"M0", d0};
  e2.circles.push_back({"c", {MarkedPoint{"h", Direction::Outgoing, 1}}});
  q.patches = {f, e1, e2};
  auto lab = SeamLabel{"L01", false, {d0, d1}};
  q.seams.push_back({CompRef{"E1", "c", 0}, CompRef{"F", "c", 0}, lab});
  q.seams.push_back({CompRef{"E2", "c", 0}, CompRef{"F", "c", 1}, lab});
  q.outgoing.push_back({"F", "f1"});
  return q;
}

/// Defect generator: an M0 strip joining two one-punctured M1 disks.
inline QuiltedSurface s0_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch g;
  g.id = "G";
  g.label = {"M0", d0};
  g.circles.push_back({"c",
                       {MarkedPoint{"g1", Direction::Outgoing, 1},
                        MarkedPoint{"g2", Direction::Outgoing, 1}}});
  Patch h1;
  h1.id = "H1";
  h1.label = {"M1", d1};
  h1.circles.push_back({"c", {MarkedPoint{"u", Direction::Outgoing, 1}}});
  Patch h2;
  h2.id = "H2";
  h2.label = {"M1", d1};
  h2.circles.push_back({"c", {MarkedPoint{"v", Direction::Outgoing, 1}}});
  q.patches = {g, h1, h2};
  auto lab = SeamLabel{"L01", false, {d0, d1}};
  q.seams.push_back({CompRef{"G", "c", 0}, CompRef{"H1", "c", 0}, lab});
  q.seams.push_back({CompRef{"G", "c", 1}, CompRef{"H2", "c", 0}, lab});
  q.outgoing.push_back({"H1", "u"});
  return q;
}

/// Expected shape of gluing the defect generators into the composite pair
/// of pants: three patches, two seams.
inline QuiltedSurface s3p_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch a;
  a.id = "A";
  a.label = {"M1", d1};
  a.circles.push_back({"cA", {MarkedPoint{"x1", Direction::Incoming, 1}}});
  a.circles.push_back({"cB", {MarkedPoint{"y1", Direction::Incoming, 1}}});
  a.punctures.push_back({"w", Direction::Outgoing});
  Patch b;
  b.id = "B";
  b.label = {"M0", d0};
  b.circles.push_back({"c", {MarkedPoint{"x0", Direction::Incoming, 1}}});
  Patch b2;
  b2.id = "B2";
  b2.label = {"M0", d0};
  b2.circles.push_back({"c", {MarkedPoint{"y0", Direction::Incoming, 1}}});
  q.patches = {a, b, b2};
  auto lab = SeamLabel{"L01", false, {d0, d1}};
  q.seams.push_back({CompRef{"B", "c", 0}, CompRef{"A", "cA", 0}, lab});
  q.seams.push_back({CompRef{"B2", "c", 0}, CompRef{"A", "cB", 0}, lab});
  q.incoming.push_back({"B", "x0"});
  q.incoming.push_back({"B2", "y0"});
  q.outgoing.push_back({"A", "w"});
  return q;
}

/// Two patches, two seams: one M1 disk with two boundary punctures and an
/// outgoing interior end against one M0 disk with two boundary punctures.
inline QuiltedSurface s2p_quilt(int N, int d0, int d1) {
  QuiltedSurface q;
  q.modulus = N;
  Patch a;
  a.id = "A";
  a.label = {"M1", d1};
  a.circles.push_back({"c",
                       {MarkedPoint{"p", Direction::Incoming, 1},
                        MarkedPoint{"qq", Direction::Incoming, 1}}});
  a.punctures.push_back({"w", Direction::Outgoing});
  Patch b;
  b.id = "B";
  b.label = {"M0", d0};
  b.circles.push_back({"c",
                       {MarkedPoint{"r", Direction::Incoming, 1},
                        MarkedPoint{"s", Direction::Incoming, 1}}});
  q.patches = {a, b};
  auto lab = SeamLabel{"L01", false, {d0, d1}};
  q.seams.push_back({CompRef{"B", "c", 1}, CompRef{"A", "c", 0}, lab});
  q.seams.push_back({CompRef{"B", "c", 0}, CompRef{"A", "c", 1}, lab});
  q.incoming.push_back({"B", "s"});
  q.incoming.push_back({"B", "r"});
  q.outgoing.push_back({"A", "w"});
  return q;
}

/// Two-correspondence cylinder: interior-punctured disks over M0 and M2
/// seamed to the two boundary circles of an M1 annulus.
inline QuiltedSurface comp_cylinder(int N, int d0, int d1, int d2) {
  QuiltedSurface q;
  q.modulus = N;
  Patch p0;
  p0.id = "P0";
  p0.label = {"M0", d0};
  p0.circles.push_back({"c", {}});
  p0.punctures.push_back({"z", Direction::Incoming});
  Patch pa;
  pa.id = "PA";
  pa.label = {"M1", d1};
  pa.circles.push_back({"c0", {}});
  pa.circles.push_back({"c1", {}});
  Patch p2;
  p2.id = "P2";
  p2.label = {"M2", d2};
  p2.circles.push_back({"c", {}});
  p2.punctures.push_back({"w", Direction::Outgoing});
  q.patches = {p0, pa, p2};
  q.seams.push_back({CompRef{"P0", "c", 0}, CompRef{"PA", "c0", 0},
                     SeamLabel{"L01", false, {d0, d1}}});
  q.seams.push_back({CompRef{"PA", "c1", 0}, CompRef{"P2", "c", 0},
                     SeamLabel{"L12", false, {d1, d2}}});
  q.incoming.push_back({"P0", "z"});
  q.outgoing.push_back({"P2", "w"});
  return q;
}

/// Stack of three strips with seams between consecutive ones.
inline QuiltedSurface triangle(int N, int d0, int d1, int d2) {
  QuiltedSurface q;
  q.modulus = N;
  auto mk = [&](const std::string& id, const std::string& m, int dim) {
    Patch p;
    p.id = id;
    p.label = {m, dim};
    p.circles.push_back({"c",
                         {MarkedPoint{"a", Direction::Incoming, 1},
                          MarkedPoint{"b", Direction::Outgoing, 1}}});
    return p;
  };
  q.patches = {mk("S0", "M0", d0), mk("S1", "M1", d1), mk("S2", "M2", d2)};
  q.seams.push_back({CompRef{"S0", "c", 1}, CompRef{"S1", "c", 0},
                     SeamLabel{"L01", false, {d0, d1}}});
  q.seams.push_back({CompRef{"S1", "c", 1}, CompRef{"S2", "c", 0},
                     SeamLabel{"L12", false, {d1, d2}}});
  q.boundary_labels.push_back({CompRef{"S0", "c", 0}, "L0", d0});
  q.boundary_labels.push_back({CompRef{"S2", "c", 1}, "L2", d2});
  q.incoming.push_back({"S0", "a"});
  q.outgoing.push_back({"S0", "b"});
  return q;
}

/// What the triangle becomes after shrinking the middle strip.
inline QuiltedSurface triangle_composed(int N, int d0, int d2,
                                        const std::string& label) {
  QuiltedSurface q;
  q.modulus = N;
  auto mk = [&](const std::string& id, const std::string& m, int dim) {
    Patch p;
    p.id = id;
    p.label = {m, dim};
    p.circles.push_back({"c",
                         {MarkedPoint{"a", Direction::Incoming, 1},
                          MarkedPoint{"b", Direction::Outgoing, 1}}});
    return p;
  };
  q.patches = {mk("S0", "M0", d0), mk("S2", "M2", d2)};
  q.seams.push_back({CompRef{"S0", "c", 1}, CompRef{"S2", "c", 0},
                     SeamLabel{label, false, {d0, d2}}});
  q.boundary_labels.push_back({CompRef{"S0", "c", 0}, "L0", d0});
  q.boundary_labels.push_back({CompRef{"S2", "c", 1}, "L2", d2});
  q.incoming.push_back({"S0", "a"});
  q.outgoing.push_back({"S0", "b"});
  return q;
}

}  // namespace fixtures

// ---------------------------------------------------------------------------
// packaged demo data

struct DemoData {
  FixtureMap fixtures;
  GeneratorAssignment assignment;
  GradedModule cf;       // module carried by the strip ends
  GradedModule cf_dual;  // reversed-pair module
  DualityDatum duality;
};

/// Strip, pairing, copairing, and closed-disk generators over a free
/// module with the given generator degrees; the dual module's degrees are
/// determined by the pairing.
inline DemoData make_demo(int N, Ring ring = Ring::Z, int dim = 2,
                          std::vector<int> degrees = {0, 1, 1}) {
  DemoData d;
  const int n = dim / 2;
  d.cf = GradedModule{N, ring, {}};
  d.cf_dual = GradedModule{N, ring, {}};
  for (size_t i = 0; i < degrees.size(); ++i) {
    int g = reduce_mod(degrees[i], N);
    d.cf.basis.push_back({"x" + std::to_string(i), g});
    d.cf_dual.basis.push_back({"x" + std::to_string(i) + "'",
                               reduce_mod(n - g, N)});
  }
  d.duality = make_duality(d.cf, d.cf_dual, n);

  d.fixtures["strip"] = fixtures::strip(N, dim, "L0", "L1");
  d.fixtures["cap"] = fixtures::cap(N, dim, "L0", "L1");
  d.fixtures["cup"] = fixtures::cup(N, dim, "L0", "L1");
  d.fixtures["disk"] = fixtures::disk(N, dim, "L0");

  Ends se = extract_ends(d.fixtures["strip"]);
  std::string key01 = se.incoming[0].key();
  Ends ce = extract_ends(d.fixtures["cap"]);
  std::string key10 = ce.incoming[1].key();
  d.assignment.register_end_module(key01, d.cf);
  d.assignment.register_end_module(key10, d.cf_dual);
  d.assignment.register_duality(key01, d.duality);
  d.assignment.register_duality(key10, reversed_duality(d.duality));

  d.assignment.assign(d.fixtures["strip"], identity_map(d.cf));
  d.assignment.assign(d.fixtures["cap"], cap_map(d.duality));
  d.assignment.assign(d.fixtures["cup"], cup_map(d.duality));
  d.assignment.assign(d.fixtures["disk"],
                      zero_map(ground_module(N, ring), ground_module(N, ring),
                               reduce_mod(-n, N)));
  return d;
}

// ---------------------------------------------------------------------------

struct SuiteCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The quilt manipulations behind the factorization of the cylinder
/// morphism, the two composite-pair-of-pants gluings, the annulus-shrink
/// rewriting, and the cylinder degree, verified combinatorially.
inline std::vector<SuiteCheck> section6_suite() {
  const int N = 4, d0 = 2, d1 = 4, d2 = 2;
  std::vector<SuiteCheck> out;
  auto check = [&](const std::string& name, bool pass, std::string detail) {
    out.push_back({name, pass, std::move(detail)});
  };

  {
    QuiltedSurface joined =
        disjoint_union(fixtures::psi_quilt(N, d0, d1), fixtures::theta_quilt(N, d0, d1));
    QuiltedSurface glued = glue(joined, EndRef{"Q0", "a"}, EndRef{"P0", "a"});
    bool ok = combinatorial_eq(glued, fixtures::phi_cylinder(N, d0, d1));
    check("factorization", ok, "glued half cylinders match the full cylinder");
  }
  {
    QuiltedSurface joined = disjoint_union(fixtures::s3comp_quilt(N, d0, d1),
                                           fixtures::s1_quilt(N, d0, d1));
    QuiltedSurface glued = glue(joined, EndRef{"C", "c1"}, EndRef{"F", "f1"});
    bool ok = combinatorial_eq(glued, fixtures::s3p_quilt(N, d0, d1));
    check("three_patch_ancestor", ok,
          "composite pair of pants with the first defect generator");
  }
  {
    QuiltedSurface joined = disjoint_union(fixtures::s3comp_quilt(N, d0, d1),
                                           fixtures::s0_quilt(N, d0, d1));
    QuiltedSurface glued = glue(joined, EndRef{"C", "c1"}, EndRef{"H1", "u"});
    bool ok = combinatorial_eq(glued, fixtures::s2p_quilt(N, d0, d1));
    check("two_patch_ancestor", ok,
          "composite pair of pants with the second defect generator");
  }
  {
    auto [shrunk, shift] = shrink_strip(fixtures::comp_cylinder(N, d0, d1, d2), "PA");
    bool ok = combinatorial_eq(
        shrunk, fixtures::phi_cylinder(N, d0, d2, "(L01*L12)", "M0", "M2"));
    ok = ok && shift.n == d1 / 2 && shift.d == 0;
    check("annulus_shrink", ok, "cylinder over the composed correspondence");
  }
  {
    int got = degree_shift(fixtures::phi_cylinder(N, d0, d1));
    int want = reduce_mod(d1 / 2 - d0 / 2, N);
    check("cylinder_degree", got == want,
          "degree " + std::to_string(got) + " expected " + std::to_string(want));
  }
  return out;
}

}  // namespace quiltkit
