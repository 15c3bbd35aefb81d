#include <doctest.h>

#include <random>

#include "quiltkit/engine.hpp"
#include "quiltkit/quilt.hpp"

using namespace quiltkit;

namespace {

bool clean(const QuiltedSurface& q) { return is_valid(q); }

int count_errors(const std::vector<Violation>& v) {
  int n = 0;
  for (const auto& x : v)
    if (!x.warning) ++n;
  return n;
}

}  // namespace

TEST_CASE("the strip validates") {
  QuiltedSurface q = fixtures::strip(4, 2, "L0", "L1");
  CHECK(validate(q).empty());
}

TEST_CASE("empty quilt is valid and a union unit") {
  QuiltedSurface e;
  e.modulus = 4;
  CHECK(validate(e).empty());
  QuiltedSurface s = fixtures::strip(4, 2, "L0", "L1");
  CHECK(combinatorial_eq(disjoint_union(s, e), s));
  CHECK(combinatorial_eq(disjoint_union(e, s), s));
}

TEST_CASE("seam direction mismatch is a violation") {
  // two strips seamed so an incoming end would match an outgoing one:
  // same-direction stacking pairs a's with b's unless directions align
  QuiltedSurface q;
  q.modulus = 4;
  auto mk = [&](const std::string& id, Direction d0, Direction d1) {
    Patch p;
    p.id = id;
    p.label = {"M", 2};
    p.circles.push_back({"c",
                         {MarkedPoint{"a", d0, 1}, MarkedPoint{"b", d1, 1}}});
    return p;
  };
  q.patches = {mk("P", Direction::Incoming, Direction::Outgoing),
               mk("Q", Direction::Outgoing, Direction::Incoming)};
  q.seams.push_back({CompRef{"P", "c", 1}, CompRef{"Q", "c", 0},
                     SeamLabel{"L", false, {2, 2}}});
  q.boundary_labels.push_back({CompRef{"P", "c", 0}, "B0", 2});
  q.boundary_labels.push_back({CompRef{"Q", "c", 1}, "B1", 2});
  auto v = validate(q);
  bool found = false;
  for (const auto& x : v)
    if (x.code == "DirectionMismatch") found = true;
  CHECK(found);
}

TEST_CASE("doubly seamed component is a violation") {
  QuiltedSurface q;
  q.modulus = 4;
  Patch p;
  p.id = "P";
  p.label = {"M", 2};
  p.circles.push_back({"c", {}});
  Patch r = p;
  r.id = "Q";
  Patch s = p;
  s.id = "R";
  q.patches = {p, r, s};
  q.seams.push_back({CompRef{"P", "c", 0}, CompRef{"Q", "c", 0},
                     SeamLabel{"L", false, {2, 2}}});
  q.seams.push_back({CompRef{"P", "c", 0}, CompRef{"R", "c", 0},
                     SeamLabel{"L", false, {2, 2}}});
  auto v = validate(q);
  bool found = false;
  for (const auto& x : v)
    if (x.code == "DoublySeamed") found = true;
  CHECK(found);
}

TEST_CASE("euler characteristics") {
  QuiltedSurface s = fixtures::strip(4, 2, "L0", "L1");
  CHECK(euler(s).total == 1);

  Patch annulus;
  annulus.genus = 0;
  annulus.circles = {{"c0", {}}, {"c1", {}}};
  CHECK(annulus.euler() == 0);

  Patch genus2;
  genus2.genus = 2;
  CHECK(genus2.euler() == -2);
}

TEST_CASE("extract ends of the strip") {
  QuiltedSurface q = fixtures::strip(4, 2, "L0", "L1");
  Ends e = extract_ends(q);
  REQUIRE(e.incoming.size() == 1);
  REQUIRE(e.outgoing.size() == 1);
  CHECK(e.incoming[0].strips.size() == 1);
  CHECK_FALSE(e.incoming[0].cyclic);
  REQUIRE(e.incoming[0].labels.size() == 2);
  CHECK(e.incoming[0].labels[0].name == "L0");
  CHECK(e.incoming[0].labels[1].name == "L1");
  CHECK(e.incoming[0].key() == e.outgoing[0].key());
}

TEST_CASE("extract ends groups strips through seams") {
  // figure-two shape: three patches, ends grouped (2)(1) incoming, (4) outgoing
  QuiltedSurface q;
  q.modulus = 4;
  Patch s1;
  s1.id = "S1";
  s1.label = {"MA", 2};
  s1.circles.push_back({"c",
                        {MarkedPoint{"m0", Direction::Incoming, 1},
                         MarkedPoint{"m1", Direction::Outgoing, 1}}});
  Patch s2;
  s2.id = "S2";
  s2.label = {"MB", 2};
  s2.circles.push_back({"c",
                        {MarkedPoint{"m0", Direction::Incoming, 1},
                         MarkedPoint{"m1", Direction::Incoming, 1},
                         MarkedPoint{"m2", Direction::Outgoing, 1},
                         MarkedPoint{"m3", Direction::Outgoing, 1}}});
  Patch s3;
  s3.id = "S3";
  s3.label = {"MC", 2};
  s3.circles.push_back({"c", {MarkedPoint{"m0", Direction::Outgoing, 1}}});
  q.patches = {s1, s2, s3};
  // S2 interval 3 (m3 -> m0) seamed to S1 interval 0 (m0 -> m1);
  // S2 interval 2 (m2 -> m3) seamed to S3 interval 0 (whole circle)
  q.seams.push_back({CompRef{"S2", "c", 3}, CompRef{"S1", "c", 0},
                     SeamLabel{"LAB", false, {2, 2}}});
  q.seams.push_back({CompRef{"S2", "c", 2}, CompRef{"S3", "c", 0},
                     SeamLabel{"LBC", false, {2, 2}}});
  q.boundary_labels.push_back({CompRef{"S1", "c", 1}, "B1", 2});
  q.boundary_labels.push_back({CompRef{"S2", "c", 0}, "B2", 2});
  q.boundary_labels.push_back({CompRef{"S2", "c", 1}, "B3", 2});
  // wrong basepoint for the length-two chain: rejected
  q.incoming.push_back({"S1", "m0"});
  q.incoming.push_back({"S2", "m1"});
  q.outgoing.push_back({"S2", "m2"});
  REQUIRE(count_errors(validate(q)) > 0);

  q.incoming[0] = {"S2", "m0"};
  REQUIRE(is_valid(q));
  Ends e = extract_ends(q);
  REQUIRE(e.incoming.size() == 2);
  REQUIRE(e.outgoing.size() == 1);
  std::multiset<size_t> in_sizes{e.incoming[0].strips.size(),
                                 e.incoming[1].strips.size()};
  CHECK(in_sizes == std::multiset<size_t>{1, 2});
  CHECK(e.outgoing[0].strips.size() == 4);
}

TEST_CASE("closed up cylinder pair has no ends") {
  QuiltedSurface q;
  q.modulus = 4;
  Patch a;
  a.id = "A";
  a.label = {"M", 2};
  a.circles = {{"c0", {}}, {"c1", {}}};
  Patch b = a;
  b.id = "B";
  q.patches = {a, b};
  q.seams.push_back({CompRef{"A", "c0", 0}, CompRef{"B", "c0", 0},
                     SeamLabel{"L", false, {2, 2}}});
  q.seams.push_back({CompRef{"A", "c1", 0}, CompRef{"B", "c1", 0},
                     SeamLabel{"L2", false, {2, 2}}});
  REQUIRE(is_valid(q));
  Ends e = extract_ends(q);
  CHECK(e.incoming.empty());
  CHECK(e.outgoing.empty());
}

TEST_CASE("disjoint union concatenates and renames on collision") {
  QuiltedSurface s = fixtures::strip(4, 2, "L0", "L1");
  QuiltedSurface u = disjoint_union(s, s);
  REQUIRE(is_valid(u));
  CHECK(u.patches.size() == 2);
  CHECK(u.incoming.size() == 2);
  CHECK(u.outgoing.size() == 2);
  CHECK(euler(u).total == 2);
  QuiltedSurface t = fixtures::strip(4, 2, "L0", "L1");
  CHECK_THROWS_AS(disjoint_union(s, fixtures::strip(6, 2, "L0", "L1")), Error);
}

TEST_CASE("gluing the strip to itself yields the annulus") {
  QuiltedSurface s = fixtures::strip(4, 2, "L0", "L1");
  QuiltedSurface a = glue(s, EndRef{"P", "in"}, EndRef{"P", "out"});
  REQUIRE(is_valid(a));
  REQUIRE(a.patches.size() == 1);
  CHECK(a.patches[0].genus == 0);
  CHECK(a.patches[0].circles.size() == 2);
  CHECK(euler(a).total == 0);
  CHECK(a.incoming.empty());
  CHECK(a.outgoing.empty());
  // both boundary circles are compact and labeled
  CHECK(a.boundary_labels.size() == 2);
  std::multiset<std::string> names;
  for (const auto& b : a.boundary_labels) names.insert(b.name);
  CHECK(names == std::multiset<std::string>{"L0", "L1"});
}

TEST_CASE("gluing strip to strip yields a strip") {
  QuiltedSurface s1 = fixtures::strip(4, 2, "L0", "L1");
  QuiltedSurface s2 = fixtures::strip(4, 2, "L0", "L1");
  QuiltedSurface u = disjoint_union(s1, s2);
  // q2 patches renamed to avoid collision
  REQUIRE(u.patches[1].id != "P");
  QuiltedSurface g = glue(u, EndRef{u.patches[1].id, "in"}, EndRef{"P", "out"});
  REQUIRE(is_valid(g));
  CHECK(euler(g).total == 1);
  CHECK(g.incoming.size() == 1);
  CHECK(g.outgoing.size() == 1);
  CHECK(combinatorial_eq(g, fixtures::strip(4, 2, "L0", "L1")));
}

TEST_CASE("gluing decreases euler characteristic by the end length") {
  const int N = 4;
  QuiltedSurface tri = fixtures::triangle(N, 2, 4, 2);
  QuiltedSurface tri2 = fixtures::triangle(N, 2, 4, 2);
  QuiltedSurface u = disjoint_union(tri, tri2);
  int before = euler(u).total;
  QuiltedSurface g = glue(u, EndRef{u.patches[3].id, "a"}, EndRef{"S0", "b"});
  CHECK(euler(g).total == before - 3);
  CHECK(combinatorial_eq(g, tri));
}

TEST_CASE("glue rejects mismatched ends") {
  QuiltedSurface s = fixtures::strip(4, 2, "L0", "L1");
  QuiltedSurface other = fixtures::strip(4, 2, "L0", "LX");
  QuiltedSurface u = disjoint_union(s, other);
  CHECK_THROWS_AS(glue(u, EndRef{u.patches[1].id, "in"}, EndRef{"P", "out"}),
                  Error);

  QuiltedSurface wide = fixtures::strip(4, 2, "L0", "L1");
  wide.patches[0].circles[0].marked[0].width = 2;
  QuiltedSurface u2 = disjoint_union(s, wide);
  CHECK_THROWS_AS(glue(u2, EndRef{u2.patches[1].id, "in"}, EndRef{"P", "out"}),
                  Error);
}

TEST_CASE("degree shift examples") {
  CHECK(degree_shift(fixtures::strip(4, 2, "L0", "L1")) == 0);
  // the pairing disk has degree -n
  CHECK(degree_shift(fixtures::cap(4, 2, "L0", "L1")) == reduce_mod(-1, 4));
  CHECK(degree_shift(fixtures::cup(4, 2, "L0", "L1")) == 1);
  // quilted cylinder: n1 - n0
  CHECK(degree_shift(fixtures::phi_cylinder(4, 2, 4)) == 1);
  CHECK(degree_shift(fixtures::phi_cylinder(8, 2, 6)) == 2);
}

TEST_CASE("degree shift is glue invariant") {
  QuiltedSurface s = fixtures::strip(4, 2, "L0", "L1");
  int before = degree_shift(s);
  QuiltedSurface a = glue(s, EndRef{"P", "in"}, EndRef{"P", "out"});
  CHECK(degree_shift(a) == before);

  QuiltedSurface tri = fixtures::triangle(6, 2, 4, 2);
  QuiltedSurface u = disjoint_union(tri, tri);
  int du = degree_shift(u);
  QuiltedSurface g = glue(u, EndRef{u.patches[3].id, "a"}, EndRef{"S0", "b"});
  CHECK(degree_shift(g) == du);
}

TEST_CASE("shrinking the triangle's middle strip composes the seams") {
  const int N = 4;
  QuiltedSurface tri = fixtures::triangle(N, 2, 4, 2);
  auto [shrunk, shift] = shrink_strip(tri, "S1");
  CHECK(shift.n == 2);
  CHECK(shift.d == 0);
  REQUIRE(is_valid(shrunk));
  CHECK(combinatorial_eq(shrunk, fixtures::triangle_composed(N, 2, 2, "(L01*L12)")));
  Ends e = extract_ends(shrunk);
  REQUIRE(e.incoming.size() == 1);
  REQUIRE(e.incoming[0].labels.size() == 3);
  CHECK(e.incoming[0].labels[1].name == "(L01*L12)");
}

TEST_CASE("shrink bookkeeping moves the degree shift by minus n d") {
  // both-outgoing strip: d = +1
  const int N = 8;
  QuiltedSurface q;
  q.modulus = N;
  Patch mid;
  mid.id = "S1";
  mid.label = {"M1", 4};
  mid.circles.push_back({"c",
                         {MarkedPoint{"a", Direction::Outgoing, 1},
                          MarkedPoint{"b", Direction::Outgoing, 1}}});
  Patch lo;
  lo.id = "S0";
  lo.label = {"M0", 2};
  lo.circles.push_back({"c",
                        {MarkedPoint{"a", Direction::Outgoing, 1},
                         MarkedPoint{"b", Direction::Outgoing, 1}}});
  Patch hi;
  hi.id = "S2";
  hi.label = {"M2", 2};
  hi.circles.push_back({"c",
                        {MarkedPoint{"a", Direction::Outgoing, 1},
                         MarkedPoint{"b", Direction::Outgoing, 1}}});
  q.patches = {lo, mid, hi};
  q.seams.push_back({CompRef{"S0", "c", 1}, CompRef{"S1", "c", 0},
                     SeamLabel{"L01", false, {2, 4}}});
  q.seams.push_back({CompRef{"S1", "c", 1}, CompRef{"S2", "c", 0},
                     SeamLabel{"L12", false, {4, 2}}});
  q.boundary_labels.push_back({CompRef{"S0", "c", 0}, "L0", 2});
  q.boundary_labels.push_back({CompRef{"S2", "c", 1}, "L2", 2});
  // one chain climbs the stack, the other descends
  q.outgoing.push_back({"S0", "b"});
  q.outgoing.push_back({"S2", "a"});
  REQUIRE(is_valid(q));
  int before = degree_shift(q);
  auto [shrunk, shift] = shrink_strip(q, "S1");
  CHECK(shift.n == 2);
  CHECK(shift.d == 1);
  CHECK(degree_shift(shrunk) == reduce_mod(before - shift.n * shift.d, N));
}

TEST_CASE("shrink errors") {
  const int N = 4;
  QuiltedSurface tri = fixtures::triangle(N, 2, 4, 2);
  CHECK_THROWS_AS(shrink_strip(tri, "missing"), Error);
  // S0 has one boundary side and one seam: legal; S2 likewise. A formal
  // strip with both sides boundary is rejected.
  QuiltedSurface s = fixtures::strip(N, 2, "L0", "L1");
  CHECK_THROWS_AS(shrink_strip(s, "P"), Error);
}

TEST_CASE("shrink with one true boundary side composes into a boundary label") {
  const int N = 4;
  QuiltedSurface tri = fixtures::triangle(N, 2, 4, 2);
  auto [shrunk, shift] = shrink_strip(tri, "S0");
  CHECK(shift.n == 1);
  CHECK(shift.d == 0);
  REQUIRE(is_valid(shrunk));
  // S1's lower interval becomes a true boundary labeled by the composite
  bool found = false;
  for (const auto& b : shrunk.boundary_labels)
    if (b.name == "(L0*L01)") found = true;
  CHECK(found);
  Ends e = extract_ends(shrunk);
  REQUIRE(e.incoming.size() == 1);
  CHECK(e.incoming[0].strips.size() == 2);
}

TEST_CASE("shrink with concrete labels computes the geometric composition") {
  const int N = 4;
  SymplecticSpace v1 = standard_space(1), v2 = standard_space(2);
  QuiltedSurface tri = fixtures::triangle(N, 2, 4, 2);
  // concrete: L01 = graph-like split correspondence, L12 its reverse
  // L01 = L0 x L with L in V2; L12 = L' x L2 with L' transverse to L
  QMat l0(2, 1), l(4, 2), lp(4, 2), l2(2, 1);
  l0(0, 0) = 1;
  l(0, 0) = 1;
  l(2, 1) = 1;  // span(e_p1, e_p2)
  lp(1, 0) = 1;
  lp(3, 1) = 1;  // span(e_q1, e_q2)
  l2(1, 0) = 1;
  tri.seams[0].label.corr =
      LagrangianCorrespondence{v1, v2, QMat::block_diag(l0, l)};
  tri.seams[1].label.corr =
      LagrangianCorrespondence{v2, v1, QMat::block_diag(lp, l2)};
  auto [shrunk, shift] = shrink_strip(tri, "S1");
  REQUIRE(shrunk.seams.size() == 1);
  REQUIRE(shrunk.seams[0].label.corr.has_value());
  CHECK(same_column_span(shrunk.seams[0].label.corr->basis,
                         QMat::block_diag(l0, l2)));

  // non-transverse concrete composition is rejected
  QuiltedSurface bad = fixtures::triangle(N, 2, 4, 2);
  bad.seams[0].label.corr =
      LagrangianCorrespondence{v1, v2, QMat::block_diag(l0, l)};
  bad.seams[1].label.corr =
      LagrangianCorrespondence{v2, v1, QMat::block_diag(l, l2)};
  CHECK_THROWS_AS(shrink_strip(bad, "S1"), Error);
}

TEST_CASE("combinatorial type is rotation invariant") {
  QuiltedSurface a = fixtures::cap(4, 2, "L0", "L1");
  QuiltedSurface b = a;
  // rotate the stored cyclic list: marked [y, x], relabel intervals
  auto& c = b.patches[0].circles[0];
  std::rotate(c.marked.begin(), c.marked.begin() + 1, c.marked.end());
  // old interval 0 (x->y) is now interval 1; boundary labels move along
  b.boundary_labels[0].at.interval = 1;
  b.boundary_labels[1].at.interval = 0;
  REQUIRE(is_valid(b));
  CHECK(combinatorial_eq(a, b));
}

TEST_CASE("combinatorial type distinguishes strip from annulus") {
  QuiltedSurface s = fixtures::strip(4, 2, "L0", "L1");
  QuiltedSurface a = glue(s, EndRef{"P", "in"}, EndRef{"P", "out"});
  CHECK_FALSE(combinatorial_eq(fixtures::strip(4, 2, "L0", "L1"), a));
}

TEST_CASE("two serializations of one quilt have equal type") {
  // same figure-two quilt, written with rotated circles, swapped seam
  // sides (transposing the label), and permuted seam list
  const int N = 4;
  QuiltedSurface a = fixtures::s3comp_quilt(N, 2, 4);
  QuiltedSurface b = a;
  std::swap(b.seams[0], b.seams[3]);
  for (auto& s : {0, 1}) {
    std::swap(b.seams[s].a, b.seams[s].b);
    b.seams[s].label.transposed = !b.seams[s].label.transposed;
    b.seams[s].label.dim_pair = {b.seams[s].label.dim_pair.second,
                                 b.seams[s].label.dim_pair.first};
  }
  // rotate C's circle by two
  auto& c = b.patches[0].circles[0];
  std::rotate(c.marked.begin(), c.marked.begin() + 2, c.marked.end());
  for (auto& s : b.seams) {
    for (CompRef* side : {&s.a, &s.b})
      if (side->patch == "C") side->interval = (side->interval + 2) % 4;
  }
  REQUIRE(is_valid(b));
  CHECK(combinatorial_eq(a, b));
}

TEST_CASE("extract_ends partitions the marked points") {
  for (const QuiltedSurface& q :
       {fixtures::s3comp_quilt(4, 2, 4), fixtures::pop_quilt(4, 2, 4),
        fixtures::triangle(4, 2, 4, 2), fixtures::psi_quilt(4, 2, 4)}) {
    Ends e = extract_ends(q);
    std::multiset<std::pair<std::string, std::string>> seen;
    for (const auto& bucket : {e.incoming, e.outgoing})
      for (const auto& end : bucket) {
        if (end.cylindrical) continue;
        for (const auto& s : end.strips) seen.insert({s.patch, s.point});
      }
    std::multiset<std::pair<std::string, std::string>> all;
    for (const auto& p : q.patches)
      for (const auto& c : p.circles)
        for (const auto& m : c.marked) all.insert({p.id, m.id});
    CHECK(seen == all);
  }
}

TEST_CASE("patch deficiency") {
  QuiltedSurface psi = fixtures::psi_quilt(4, 2, 4);
  CHECK(patch_deficiency(psi.patches[0]) == 0);
  CHECK(patch_deficiency(psi.patches[1]) == 0);
  QuiltedSurface theta = fixtures::theta_quilt(4, 2, 4);
  CHECK(patch_deficiency(theta.patches[0]) == -1);
  CHECK(patch_deficiency(theta.patches[1]) == 1);
}

TEST_CASE("interior punctures on noncompact labels warn") {
  QuiltedSurface q = fixtures::phi_cylinder(4, 2, 4);
  q.patches[0].label.compact = false;
  auto v = validate(q);
  CHECK(count_errors(v) == 0);
  bool warned = false;
  for (const auto& x : v)
    if (x.warning) warned = true;
  CHECK(warned);
}
