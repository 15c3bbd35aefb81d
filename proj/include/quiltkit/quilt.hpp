#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quiltkit/symplectic.hpp"

namespace quiltkit {

enum class Direction { Incoming, Outgoing };

inline std::string dir_str(Direction d) {
  return d == Direction::Incoming ? "in" : "out";
}

struct MarkedPoint {
  std::string id;
  Direction dir = Direction::Incoming;
  Rational width = 1;
};

/// Boundary circle of the compact surface; marked points in cyclic order.
/// Interval i runs from marked point i to marked point i+1 (mod count);
/// a circle without marked points is a single compact component.
struct BoundaryCircle {
  std::string id;
  std::vector<MarkedPoint> marked;
};

struct InteriorPuncture {
  std::string id;
  Direction dir = Direction::Incoming;
};

struct PatchLabel {
  std::string name;
  int dim = 0;
  bool compact = true;
  std::optional<SymplecticSpace> space;
};

struct Patch {
  std::string id;
  int genus = 0;
  std::vector<BoundaryCircle> circles;
  std::vector<InteriorPuncture> punctures;
  PatchLabel label;

  int euler() const { return 2 - 2 * genus - int(circles.size()); }
};

/// One boundary component of a patch: interval `interval` of the named
/// circle (interval 0 stands for the whole circle when it has no marked
/// points).
struct CompRef {
  std::string patch, circle;
  int interval = 0;
  bool operator==(const CompRef& o) const {
    return patch == o.patch && circle == o.circle && interval == o.interval;
  }
  bool operator<(const CompRef& o) const {
    return std::tie(patch, circle, interval) <
           std::tie(o.patch, o.circle, o.interval);
  }
};

/// Formal correspondence label; `transposed` says the a->b correspondence
/// is the transpose of the named one. A concrete value, when present, is
/// stored in the a->b direction.
struct SeamLabel {
  std::string name;
  bool transposed = false;
  std::pair<int, int> dim_pair{0, 0};
  std::optional<LagrangianCorrespondence> corr;

  std::string rendered() const { return transposed ? name + "^t" : name; }
  std::string rendered_reverse() const { return transposed ? name : name + "^t"; }
};

struct Seam {
  CompRef a, b;
  SeamLabel label;
};

struct BoundaryLabelEntry {
  CompRef at;
  std::string name;
  int dim = 0;
  std::optional<LagrangianSubspace> lag;
};

/// Reference to a strip-like end (marked point) or cylindrical end
/// (interior puncture) by patch id and point id.
struct EndRef {
  std::string patch, point;
  bool operator==(const EndRef& o) const {
    return patch == o.patch && point == o.point;
  }
};

struct QuiltedSurface {
  int modulus = 2;
  std::vector<Patch> patches;
  std::vector<Seam> seams;
  std::vector<BoundaryLabelEntry> boundary_labels;
  std::vector<EndRef> incoming, outgoing;  // quilted end orderings
};

struct Violation {
  std::string code, message;
  bool warning = false;
};

struct ShiftRecord {
  int n = 0;
  int d = 0;  // +1 both removed ends outgoing, -1 both incoming, 0 otherwise
};

// ---------------------------------------------------------------------------
// resolved indices and navigation

namespace detail {

struct PIdx {
  int patch = -1, circle = -1, mp = -1;
  bool operator==(const PIdx& o) const {
    return patch == o.patch && circle == o.circle && mp == o.mp;
  }
  bool operator<(const PIdx& o) const {
    return std::tie(patch, circle, mp) < std::tie(o.patch, o.circle, o.mp);
  }
};

struct IIdx {
  int patch = -1, circle = -1, interval = -1;
  bool operator==(const IIdx& o) const {
    return patch == o.patch && circle == o.circle && interval == o.interval;
  }
  bool operator<(const IIdx& o) const {
    return std::tie(patch, circle, interval) <
           std::tie(o.patch, o.circle, o.interval);
  }
};

/// Seam adjacency between two strip-like ends: `plus` is crossed through
/// its side+ interval, `minus` through its side- interval.
struct Link {
  PIdx plus, minus;
  int seam = -1;
  bool plus_on_a = true;  // plus-side interval is the seam's side a
};

class Nav {
 public:
  explicit Nav(const QuiltedSurface& q) : q_(&q) {
    for (int p = 0; p < int(q.patches.size()); ++p) {
      patch_by_id_[q.patches[p].id] = p;
      for (int c = 0; c < int(q.patches[p].circles.size()); ++c) {
        circle_by_id_[{p, q.patches[p].circles[c].id}] = c;
        for (int m = 0; m < int(q.patches[p].circles[c].marked.size()); ++m)
          mp_by_id_[{p, q.patches[p].circles[c].marked[m].id}] = {p, c, m};
      }
      for (int u = 0; u < int(q.patches[p].punctures.size()); ++u)
        puncture_by_id_[{p, q.patches[p].punctures[u].id}] = u;
    }
    for (int s = 0; s < int(q.seams.size()); ++s) {
      auto ia = resolve_comp(q.seams[s].a);
      auto ib = resolve_comp(q.seams[s].b);
      if (ia) seam_at_[*ia] = s;
      if (ib) seam_at_[*ib] = s;
      if (ia && ib) add_links(s, *ia, *ib);
    }
    for (int b = 0; b < int(q.boundary_labels.size()); ++b) {
      auto i = resolve_comp(q.boundary_labels[b].at);
      if (i) label_at_[*i].push_back(b);
    }
  }

  const QuiltedSurface& quilt() const { return *q_; }

  std::optional<int> patch_index(const std::string& id) const {
    auto it = patch_by_id_.find(id);
    if (it == patch_by_id_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<IIdx> resolve_comp(const CompRef& r) const {
    auto p = patch_index(r.patch);
    if (!p) return std::nullopt;
    auto c = circle_by_id_.find({*p, r.circle});
    if (c == circle_by_id_.end()) return std::nullopt;
    int n = n_intervals(*p, c->second);
    if (r.interval < 0 || r.interval >= n) return std::nullopt;
    return IIdx{*p, c->second, r.interval};
  }

  std::optional<PIdx> resolve_mp(const EndRef& r) const {
    auto p = patch_index(r.patch);
    if (!p) return std::nullopt;
    auto it = mp_by_id_.find({*p, r.point});
    if (it == mp_by_id_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<int> resolve_puncture(const EndRef& r) const {
    auto p = patch_index(r.patch);
    if (!p) return std::nullopt;
    auto it = puncture_by_id_.find({*p, r.point});
    if (it == puncture_by_id_.end()) return std::nullopt;
    return it->second;
  }

  int n_mps(int p, int c) const {
    return int(q_->patches[p].circles[c].marked.size());
  }
  int n_intervals(int p, int c) const { return std::max(1, n_mps(p, c)); }
  bool compact_circle(int p, int c) const { return n_mps(p, c) == 0; }

  const MarkedPoint& mp(const PIdx& i) const {
    return q_->patches[i.patch].circles[i.circle].marked[i.mp];
  }

  IIdx side_plus(const PIdx& e) const { return {e.patch, e.circle, e.mp}; }
  IIdx side_minus(const PIdx& e) const {
    int k = n_mps(e.patch, e.circle);
    return {e.patch, e.circle, (e.mp - 1 + k) % k};
  }

  /// marked point starting / ending an interval
  PIdx interval_start(const IIdx& i) const { return {i.patch, i.circle, i.interval}; }
  PIdx interval_end(const IIdx& i) const {
    int k = n_mps(i.patch, i.circle);
    return {i.patch, i.circle, (i.interval + 1) % k};
  }

  int seam_at(const IIdx& i) const {
    auto it = seam_at_.find(i);
    return it == seam_at_.end() ? -1 : it->second;
  }
  const std::vector<int>* labels_at(const IIdx& i) const {
    auto it = label_at_.find(i);
    return it == label_at_.end() ? nullptr : &it->second;
  }

  const Link* link_via_plus(const PIdx& e) const {
    auto it = link_plus_.find(e);
    return it == link_plus_.end() ? nullptr : &links_[it->second];
  }
  const Link* link_via_minus(const PIdx& e) const {
    auto it = link_minus_.find(e);
    return it == link_minus_.end() ? nullptr : &links_[it->second];
  }
  const std::vector<Link>& links() const { return links_; }

  EndRef ref_of(const PIdx& e) const {
    return {q_->patches[e.patch].id, mp(e).id};
  }

 private:
  void add_links(int s, const IIdx& ia, const IIdx& ib) {
    if (compact_circle(ia.patch, ia.circle) || compact_circle(ib.patch, ib.circle))
      return;  // compact seams carry no strip-like adjacency
    // orientation reversal: start of one side meets end of the other
    Link l1{interval_start(ia), interval_end(ib), s, true};
    Link l2{interval_start(ib), interval_end(ia), s, false};
    for (const Link& l : {l1, l2}) {
      link_plus_[l.plus] = int(links_.size());
      link_minus_[l.minus] = int(links_.size());
      links_.push_back(l);
    }
  }

  const QuiltedSurface* q_;
  std::map<std::string, int> patch_by_id_;
  std::map<std::pair<int, std::string>, int> circle_by_id_;
  std::map<std::pair<int, std::string>, PIdx> mp_by_id_;
  std::map<std::pair<int, std::string>, int> puncture_by_id_;
  std::map<IIdx, int> seam_at_;
  std::map<IIdx, std::vector<int>> label_at_;
  std::vector<Link> links_;
  std::map<PIdx, int> link_plus_, link_minus_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// quilted ends

struct EndLabelEntry {
  bool is_boundary = false;
  std::string name;  // rendered, transposes folded in
  bool operator==(const EndLabelEntry& o) const {
    return is_boundary == o.is_boundary && name == o.name;
  }
};

struct QuiltedEnd {
  Direction dir = Direction::Incoming;
  bool cyclic = false;
  bool cylindrical = false;
  std::vector<EndRef> strips;  // chain order; basepoint first when cyclic
  std::vector<Rational> widths;
  std::vector<std::string> patch_label_names;
  std::vector<int> patch_dims;
  std::vector<EndLabelEntry> labels;  // crossing labels; b0/bn included when noncyclic
  EndRef order_ref;                   // the reference listed in end_order

  /// Matching key: label sequence, strip dims and shape; widths excluded.
  std::string key() const {
    std::string s = cylindrical ? "cyl:" : (cyclic ? "cyc:" : "lin:");
    for (size_t i = 0; i < patch_dims.size(); ++i)
      s += std::to_string(patch_dims[i]) + (i + 1 < patch_dims.size() ? "," : "");
    s += ";";
    for (const auto& l : labels)
      s += (l.is_boundary ? "b(" : "s(") + l.name + ")";
    return s;
  }
};

struct Ends {
  std::vector<QuiltedEnd> incoming, outgoing;
};

// ---------------------------------------------------------------------------

namespace detail {

struct RawChains {
  std::vector<std::vector<PIdx>> chains;
  std::vector<bool> cyclic;
};

/// Maximal chains and cycles of strip-like ends through seam adjacencies;
/// noncyclic chains start at the end with no predecessor link.
inline RawChains discover_chains(const QuiltedSurface& q, const Nav& nav) {
  RawChains out;
  auto succ = [&](const PIdx& e) -> const Link* {
    return nav.mp(e).dir == Direction::Outgoing ? nav.link_via_plus(e)
                                                : nav.link_via_minus(e);
  };
  auto pred = [&](const PIdx& e) -> const Link* {
    return nav.mp(e).dir == Direction::Outgoing ? nav.link_via_minus(e)
                                                : nav.link_via_plus(e);
  };
  auto succ_point = [&](const PIdx& e) {
    const Link* l = succ(e);
    return nav.mp(e).dir == Direction::Outgoing ? l->minus : l->plus;
  };
  std::set<PIdx> visited;
  for (int p = 0; p < int(q.patches.size()); ++p)
    for (int c = 0; c < int(q.patches[p].circles.size()); ++c)
      for (int m = 0; m < nav.n_mps(p, c); ++m) {
        PIdx e{p, c, m};
        if (visited.count(e) || pred(e)) continue;
        std::vector<PIdx> chain;
        PIdx cur = e;
        while (true) {
          chain.push_back(cur);
          visited.insert(cur);
          if (!succ(cur)) break;
          cur = succ_point(cur);
        }
        out.chains.push_back(std::move(chain));
        out.cyclic.push_back(false);
      }
  for (int p = 0; p < int(q.patches.size()); ++p)
    for (int c = 0; c < int(q.patches[p].circles.size()); ++c)
      for (int m = 0; m < nav.n_mps(p, c); ++m) {
        PIdx e{p, c, m};
        if (visited.count(e)) continue;
        std::vector<PIdx> chain;
        PIdx cur = e;
        do {
          chain.push_back(cur);
          visited.insert(cur);
          cur = succ_point(cur);
        } while (!(cur == e));
        out.chains.push_back(std::move(chain));
        out.cyclic.push_back(true);
      }
  return out;
}

}  // namespace detail

/// Canonical end orderings for a structurally sound quilt whose end_order
/// is not yet filled in: chains in discovery order, then cylindrical ends
/// in patch order.
inline std::pair<std::vector<EndRef>, std::vector<EndRef>> suggest_end_order(
    const QuiltedSurface& q) {
  detail::Nav nav(q);
  detail::RawChains rc = detail::discover_chains(q, nav);
  std::vector<EndRef> in, out;
  for (const auto& chain : rc.chains) {
    EndRef r = nav.ref_of(chain.front());
    (nav.mp(chain.front()).dir == Direction::Incoming ? in : out).push_back(r);
  }
  for (const auto& p : q.patches)
    for (const auto& u : p.punctures)
      (u.dir == Direction::Incoming ? in : out).push_back({p.id, u.id});
  return {in, out};
}

inline std::vector<Violation> validate(const QuiltedSurface& q) {
  std::vector<Violation> out;
  auto err = [&](const std::string& code, const std::string& msg) {
    out.push_back({code, msg, false});
  };
  auto warn = [&](const std::string& code, const std::string& msg) {
    out.push_back({code, msg, true});
  };

  if (q.modulus <= 0 || q.modulus % 2 != 0)
    err("BadModulus", "grading modulus must be even and positive");

  std::set<std::string> patch_ids;
  for (const auto& p : q.patches) {
    if (p.id.empty()) err("BadId", "empty patch id");
    if (!patch_ids.insert(p.id).second) err("BadId", "duplicate patch id " + p.id);
    if (p.genus < 0) err("BadPatch", "negative genus on " + p.id);
    if (p.label.dim < 0 || p.label.dim % 2 != 0)
      err("BadPatch", "patch " + p.id + " label dimension must be even and >= 0");
    if (p.label.space && p.label.space->dim != p.label.dim)
      err("BadPatch", "patch " + p.id + " concrete space dimension mismatch");
    std::set<std::string> circle_ids, point_ids;
    for (const auto& c : p.circles) {
      if (!circle_ids.insert(c.id).second)
        err("BadId", "duplicate circle id " + c.id + " on patch " + p.id);
      for (const auto& m : c.marked) {
        if (!point_ids.insert(m.id).second)
          err("BadId", "duplicate point id " + m.id + " on patch " + p.id);
        if (m.width <= 0)
          err("BadWidth", "nonpositive width at " + p.id + "." + m.id);
      }
    }
    for (const auto& u : p.punctures)
      if (!point_ids.insert(u.id).second)
        err("BadId", "duplicate point id " + u.id + " on patch " + p.id);
    if (!p.punctures.empty() && !p.label.compact)
      warn("NoncompactCylinder",
           "patch " + p.id + " has cylindrical ends but a noncompact label");
  }
  if (!out.empty() && std::any_of(out.begin(), out.end(),
                                  [](const Violation& v) { return !v.warning; }))
    return out;  // id resolution below needs a sane structure

  detail::Nav nav(q);

  std::map<CompRef, int> seam_count;
  for (const auto& s : q.seams) {
    auto ia = nav.resolve_comp(s.a), ib = nav.resolve_comp(s.b);
    if (!ia || !ib) {
      err("BadSeam", "seam side does not resolve (" + s.a.patch + "." + s.a.circle +
                         " / " + s.b.patch + "." + s.b.circle + ")");
      continue;
    }
    if (*ia == *ib) {
      err("BadSeam", "seam identifies a component with itself");
      continue;
    }
    ++seam_count[s.a];
    ++seam_count[s.b];
    bool ca = nav.compact_circle(ia->patch, ia->circle);
    bool cb = nav.compact_circle(ib->patch, ib->circle);
    if (ca != cb)
      err("BadSeam", "seam joins a compact and a noncompact component");
    const auto& pa = q.patches[ia->patch];
    const auto& pb = q.patches[ib->patch];
    if (s.label.dim_pair != std::make_pair(pa.label.dim, pb.label.dim))
      err("BadSeam", "seam label dimensions disagree with patch labels (" +
                         s.label.name + ")");
    if (s.label.corr) {
      if (s.label.corr->source.dim != pa.label.dim ||
          s.label.corr->target.dim != pb.label.dim)
        err("BadSeam", "concrete seam correspondence has wrong dimensions");
      else {
        try {
          s.label.corr->check();
        } catch (const Error& e) {
          err("BadSeam", std::string("concrete seam label invalid: ") + e.what());
        }
      }
    }
  }
  for (const auto& [ref, n] : seam_count)
    if (n > 1)
      err("DoublySeamed", "component " + ref.patch + "." + ref.circle + "#" +
                              std::to_string(ref.interval) +
                              " appears in more than one seam");

  for (const auto& l : nav.links())
    if (nav.mp(l.plus).dir != nav.mp(l.minus).dir)
      err("DirectionMismatch",
          "seam " + q.seams[l.seam].label.name + " matches an incoming with an outgoing end");

  // boundary labels: exactly one on each unseamed component, none on seamed
  std::map<CompRef, int> label_count;
  for (const auto& b : q.boundary_labels) {
    auto i = nav.resolve_comp(b.at);
    if (!i) {
      err("BadBoundaryLabel", "boundary label at unresolved component");
      continue;
    }
    ++label_count[b.at];
    if (nav.seam_at(*i) >= 0)
      err("BadBoundaryLabel", "boundary label on a seamed component");
    if (b.dim != q.patches[i->patch].label.dim)
      err("BadBoundaryLabel", "boundary label " + b.name + " has wrong dimension");
    if (b.lag && b.lag->space.dim != q.patches[i->patch].label.dim)
      err("BadBoundaryLabel", "concrete boundary label has wrong dimension");
  }
  for (int p = 0; p < int(q.patches.size()); ++p)
    for (int c = 0; c < int(q.patches[p].circles.size()); ++c)
      for (int i = 0; i < nav.n_intervals(p, c); ++i) {
        CompRef ref{q.patches[p].id, q.patches[p].circles[c].id, i};
        detail::IIdx ii{p, c, i};
        if (nav.seam_at(ii) >= 0) continue;
        int n = label_count.count(ref) ? label_count[ref] : 0;
        if (n == 0)
          err("UnlabeledBoundary", "component " + ref.patch + "." + ref.circle +
                                       "#" + std::to_string(i) + " has no label");
        else if (n > 1)
          err("BadBoundaryLabel", "component " + ref.patch + "." + ref.circle +
                                      "#" + std::to_string(i) +
                                      " has several labels");
      }

  if (std::any_of(out.begin(), out.end(),
                  [](const Violation& v) { return !v.warning; }))
    return out;

  // chains must match the stored end orderings
  detail::RawChains rc = detail::discover_chains(q, nav);
  const auto& chains = rc.chains;
  const auto& chain_cyclic = rc.cyclic;
  std::vector<bool> chain_listed(chains.size(), false);
  auto find_chain = [&](const EndRef& r, bool& is_first_or_member, int& idx) {
    auto e = nav.resolve_mp(r);
    if (!e) return false;
    for (int i = 0; i < int(chains.size()); ++i) {
      if (chain_cyclic[i]) {
        for (const auto& x : chains[i])
          if (x == *e) {
            idx = i;
            is_first_or_member = true;
            return true;
          }
      } else if (chains[i].front() == *e) {
        idx = i;
        is_first_or_member = true;
        return true;
      } else {
        for (const auto& x : chains[i])
          if (x == *e) {
            idx = i;
            is_first_or_member = false;
            return true;
          }
      }
    }
    return false;
  };
  int listed_cyl = 0;
  for (Direction d : {Direction::Incoming, Direction::Outgoing}) {
    const auto& refs = d == Direction::Incoming ? q.incoming : q.outgoing;
    for (const auto& r : refs) {
      if (auto u = nav.resolve_puncture(r)) {
        auto p = nav.patch_index(r.patch);
        if (q.patches[*p].punctures[*u].dir != d)
          err("BadEndOrder", "cylindrical end " + r.patch + "." + r.point +
                                 " listed with the wrong direction");
        ++listed_cyl;
        continue;
      }
      bool ok_pos = false;
      int idx = -1;
      if (!find_chain(r, ok_pos, idx)) {
        err("BadEndOrder", "end reference " + r.patch + "." + r.point +
                               " does not resolve");
        continue;
      }
      if (!ok_pos)
        err("BadEndOrder", "end reference " + r.patch + "." + r.point +
                               " is not the first strip of its quilted end");
      else if (chain_listed[idx])
        err("BadEndOrder", "quilted end listed twice");
      else {
        chain_listed[idx] = true;
        Direction cd = nav.mp(chains[idx].front()).dir;
        if (cd != d)
          err("BadEndOrder", "quilted end of " + r.patch + "." + r.point +
                                 " listed with the wrong direction");
      }
    }
  }
  for (int i = 0; i < int(chains.size()); ++i)
    if (!chain_listed[i])
      err("BadEndOrder", "quilted end through " +
                             q.patches[chains[i][0].patch].id + "." +
                             nav.mp(chains[i][0]).id + " missing from end order");
  int total_punctures = 0;
  for (const auto& p : q.patches) total_punctures += int(p.punctures.size());
  if (listed_cyl != total_punctures)
    err("BadEndOrder", "cylindrical ends missing from end order");

  return out;
}

inline bool is_valid(const QuiltedSurface& q) {
  auto v = validate(q);
  return std::none_of(v.begin(), v.end(),
                      [](const Violation& x) { return !x.warning; });
}

inline void require_valid(const QuiltedSurface& q) {
  auto v = validate(q);
  for (const auto& x : v)
    if (!x.warning) throw Error("InvalidQuilt", x.code + ": " + x.message);
}

// ---------------------------------------------------------------------------

struct EulerReport {
  std::vector<std::pair<std::string, int>> per_patch;
  int total = 0;
};

inline EulerReport euler(const QuiltedSurface& q) {
  EulerReport r;
  for (const auto& p : q.patches) {
    r.per_patch.push_back({p.id, p.euler()});
    r.total += p.euler();
  }
  return r;
}

inline int outgoing_end_count(const Patch& p) {
  int n = 0;
  for (const auto& c : p.circles)
    for (const auto& m : c.marked)
      if (m.dir == Direction::Outgoing) ++n;
  for (const auto& u : p.punctures)
    if (u.dir == Direction::Outgoing) n += 2;  // a cylindrical end counts twice
  return n;
}

inline int patch_deficiency(const Patch& p) {
  return outgoing_end_count(p) - int(p.circles.size());
}

/// Grading offset of the relative invariant attached to the quilt:
/// sum over patches of (dim/2) * (#outgoing ends - euler), mod N.
inline int degree_shift(const QuiltedSurface& q) {
  require_valid(q);
  long long s = 0;
  for (const auto& p : q.patches)
    s += (long long)(p.label.dim / 2) * (outgoing_end_count(p) - p.euler());
  long long n = q.modulus;
  return int(((s % n) + n) % n);
}

// ---------------------------------------------------------------------------

inline Ends extract_ends(const QuiltedSurface& q) {
  require_valid(q);
  detail::Nav nav(q);
  auto succ_link = [&](const detail::PIdx& e) -> const detail::Link* {
    return nav.mp(e).dir == Direction::Outgoing ? nav.link_via_plus(e)
                                                : nav.link_via_minus(e);
  };
  auto succ_point = [&](const detail::Link* l, Direction d) {
    return d == Direction::Outgoing ? l->minus : l->plus;
  };
  auto crossing_entry = [&](const detail::Link* l, Direction d) {
    const Seam& s = q.seams[l->seam];
    bool from_a = d == Direction::Outgoing ? l->plus_on_a : !l->plus_on_a;
    std::string name = from_a ? s.label.rendered() : s.label.rendered_reverse();
    return EndLabelEntry{false, name};
  };
  auto boundary_entry = [&](const detail::IIdx& i) {
    const auto* ls = nav.labels_at(i);
    return EndLabelEntry{true, q.boundary_labels[(*ls)[0]].name};
  };

  auto build_chain = [&](detail::PIdx start, bool cyclic) {
    QuiltedEnd e;
    Direction d = nav.mp(start).dir;
    e.dir = d;
    e.cyclic = cyclic;
    detail::PIdx cur = start;
    while (true) {
      e.strips.push_back(nav.ref_of(cur));
      e.widths.push_back(nav.mp(cur).width);
      e.patch_label_names.push_back(q.patches[cur.patch].label.name);
      e.patch_dims.push_back(q.patches[cur.patch].label.dim);
      const detail::Link* l = succ_link(cur);
      if (!l) break;
      detail::PIdx nxt = succ_point(l, d);
      if (cyclic && nxt == start) {
        e.labels.push_back(crossing_entry(l, d));
        break;
      }
      e.labels.push_back(crossing_entry(l, d));
      cur = nxt;
    }
    if (!cyclic) {
      detail::PIdx first = start, last = nav.resolve_mp(e.strips.back()).value();
      detail::IIdx b0 = d == Direction::Outgoing ? nav.side_minus(first)
                                                 : nav.side_plus(first);
      detail::IIdx bn = d == Direction::Outgoing ? nav.side_plus(last)
                                                 : nav.side_minus(last);
      e.labels.insert(e.labels.begin(), boundary_entry(b0));
      e.labels.push_back(boundary_entry(bn));
    }
    return e;
  };

  Ends ends;
  for (Direction d : {Direction::Incoming, Direction::Outgoing}) {
    const auto& refs = d == Direction::Incoming ? q.incoming : q.outgoing;
    auto& bucket = d == Direction::Incoming ? ends.incoming : ends.outgoing;
    for (const auto& r : refs) {
      if (auto u = nav.resolve_puncture(r)) {
        QuiltedEnd e;
        e.dir = d;
        e.cylindrical = true;
        e.strips.push_back(r);
        auto p = nav.patch_index(r.patch);
        e.patch_label_names.push_back(q.patches[*p].label.name);
        e.patch_dims.push_back(q.patches[*p].label.dim);
        e.order_ref = r;
        bucket.push_back(std::move(e));
        continue;
      }
      detail::PIdx start = nav.resolve_mp(r).value();
      bool cyclic = true;
      {
        // a chain is cyclic iff walking forward returns; equivalently the
        // backward side is linked all the way round. The start we were
        // given is the stored first strip, so noncyclic iff it has no
        // predecessor link.
        const detail::Link* back =
            nav.mp(start).dir == Direction::Outgoing ? nav.link_via_minus(start)
                                                     : nav.link_via_plus(start);
        cyclic = back != nullptr;
      }
      QuiltedEnd e = build_chain(start, cyclic);
      e.order_ref = r;
      bucket.push_back(std::move(e));
    }
  }
  return ends;
}

// ---------------------------------------------------------------------------

/// Concatenation; q2 patch ids are suffixed when they collide with q1's.
inline QuiltedSurface disjoint_union(const QuiltedSurface& q1,
                                     const QuiltedSurface& q2) {
  if (q1.modulus != q2.modulus)
    throw Error("ModulusMismatch", "disjoint union needs equal grading moduli");
  QuiltedSurface out = q1;
  std::set<std::string> used;
  for (const auto& p : q1.patches) used.insert(p.id);
  std::map<std::string, std::string> rename;
  for (const auto& p : q2.patches) {
    std::string id = p.id;
    while (used.count(id)) id += "#2";
    used.insert(id);
    rename[p.id] = id;
  }
  for (Patch p : q2.patches) {
    p.id = rename[p.id];
    out.patches.push_back(std::move(p));
  }
  for (Seam s : q2.seams) {
    s.a.patch = rename[s.a.patch];
    s.b.patch = rename[s.b.patch];
    out.seams.push_back(std::move(s));
  }
  for (BoundaryLabelEntry b : q2.boundary_labels) {
    b.at.patch = rename[b.at.patch];
    out.boundary_labels.push_back(std::move(b));
  }
  for (EndRef r : q2.incoming) {
    r.patch = rename[r.patch];
    out.incoming.push_back(std::move(r));
  }
  for (EndRef r : q2.outgoing) {
    r.patch = rename[r.patch];
    out.outgoing.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// gluing

namespace detail {

struct RebuiltCircle {
  std::vector<PIdx> vertices;                  // surviving marked points
  std::vector<std::vector<IIdx>> runs;         // runs[i] joins vertex i to i+1
};

}  // namespace detail

/// Glues the outgoing quilted end `plus_ref` onto the incoming quilted end
/// `minus_ref`, strip by strip. Boundary circles are retraced through the
/// vanished punctures, seams running into the ends merge pairwise, and the
/// total Euler characteristic drops by the end length. Self-gluing is
/// allowed.
inline QuiltedSurface glue(const QuiltedSurface& q, const EndRef& minus_ref,
                           const EndRef& plus_ref) {
  Ends ends = extract_ends(q);
  const QuiltedEnd* em = nullptr;
  const QuiltedEnd* ep = nullptr;
  for (const auto& e : ends.incoming)
    if (e.order_ref == minus_ref) em = &e;
  for (const auto& e : ends.outgoing)
    if (e.order_ref == plus_ref) ep = &e;
  if (!em || !ep)
    throw Error("EndMismatch", "end references do not name listed quilted ends");
  if (em->cylindrical || ep->cylindrical)
    throw Error("EndMismatch", "cylindrical ends cannot be glued");
  if (em->cyclic != ep->cyclic)
    throw Error("EndMismatch", "cyclic and noncyclic ends cannot be glued");
  if (em->strips.size() != ep->strips.size())
    throw Error("EndMismatch", "quilted ends have different lengths");
  if (em->widths != ep->widths)
    throw Error("EndMismatch", "width vectors differ");
  if (em->labels != ep->labels)
    throw Error("EndMismatch", "label sequences differ");
  if (em->patch_label_names != ep->patch_label_names ||
      em->patch_dims != ep->patch_dims)
    throw Error("EndMismatch", "patch labels along the ends differ");

  detail::Nav nav(q);
  const int n = int(em->strips.size());
  std::map<detail::PIdx, detail::PIdx> partner;
  std::set<detail::PIdx> removed;
  std::vector<int> group(q.patches.size());
  for (size_t i = 0; i < group.size(); ++i) group[i] = int(i);
  std::function<int(int)> find = [&](int x) {
    return group[x] == x ? x : group[x] = find(group[x]);
  };
  int pair_count = 0;
  for (int i = 0; i < n; ++i) {
    detail::PIdx m = nav.resolve_mp(ep->strips[i]).value();
    detail::PIdx w = nav.resolve_mp(em->strips[i]).value();
    partner[m] = w;
    partner[w] = m;
    removed.insert(m);
    removed.insert(w);
    group[find(m.patch)] = find(w.patch);
    ++pair_count;
  }

  // retrace boundary circles through the glued punctures
  std::set<detail::IIdx> visited;
  std::map<int, std::vector<detail::RebuiltCircle>> rebuilt;  // by group root
  std::set<std::pair<int, int>> affected_circles;             // (patch, circle)
  for (const auto& [mp, _] : partner) affected_circles.insert({mp.patch, mp.circle});

  auto next_interval = [&](const detail::IIdx& i, detail::PIdx& vertex_out,
                           bool& crossed) {
    detail::PIdx end = nav.interval_end(i);
    if (!removed.count(end)) {
      vertex_out = end;
      crossed = false;
      return nav.side_plus(end);
    }
    crossed = true;
    detail::PIdx p = partner.at(end);
    return nav.side_plus(p);
  };

  for (const auto& [pp, cc] : affected_circles) {
    for (int i0 = 0; i0 < nav.n_intervals(pp, cc); ++i0) {
      detail::IIdx start{pp, cc, i0};
      if (visited.count(start)) continue;
      // collect the full cycle of intervals and surviving vertices
      std::vector<std::pair<detail::IIdx, bool>> cyc;  // interval, vertex-after?
      std::vector<detail::PIdx> verts;
      detail::IIdx cur = start;
      while (true) {
        visited.insert(cur);
        detail::PIdx v;
        bool crossed;
        detail::IIdx nxt = next_interval(cur, v, crossed);
        cyc.push_back({cur, !crossed});
        if (!crossed) verts.push_back(v);
        if (nxt == start) break;
        cur = nxt;
      }
      detail::RebuiltCircle rc;
      if (verts.empty()) {
        rc.runs.push_back({});
        for (auto& [iv, _] : cyc) rc.runs[0].push_back(iv);
      } else {
        // rotate so the cycle ends with the interval preceding vertex 0
        int first_v = -1;
        for (int i = 0; i < int(cyc.size()); ++i)
          if (cyc[i].second) {
            first_v = i;
            break;
          }
        std::rotate(cyc.begin(), cyc.begin() + first_v + 1, cyc.end());
        rc.runs.emplace_back();
        for (auto& [iv, has_vertex] : cyc) {
          rc.runs.back().push_back(iv);
          if (has_vertex) {
            rc.vertices.push_back(nav.interval_end(iv));
            rc.runs.emplace_back();
          }
        }
        rc.runs.pop_back();
        // collected runs[j] ends at vertices[j]; interval i of the new circle
        // runs from vertices[i] to vertices[i+1], which is collected run i+1
        std::rotate(rc.runs.begin(), rc.runs.begin() + 1, rc.runs.end());
      }
      rebuilt[find(pp)].push_back(rc);
    }
  }

  // assemble the new quilt
  QuiltedSurface out;
  out.modulus = q.modulus;
  std::vector<int> roots;
  {
    std::set<int> seen;
    for (int p = 0; p < int(q.patches.size()); ++p) {
      int r = find(p);
      if (seen.insert(r).second) roots.push_back(r);
    }
  }
  // keep patch order: order groups by smallest member index
  std::map<int, std::vector<int>> members;
  for (int p = 0; p < int(q.patches.size()); ++p) members[find(p)].push_back(p);
  std::sort(roots.begin(), roots.end(), [&](int a, int b) {
    return members[a].front() < members[b].front();
  });

  std::map<detail::IIdx, CompRef> interval_map;
  std::map<std::pair<int, std::string>, std::string> point_rename;  // (patch, old) -> new

  for (int r : roots) {
    const auto& mem = members[r];
    bool merged = mem.size() > 1;
    bool touched = rebuilt.count(r) > 0;
    Patch np;
    if (!merged && !touched) {
      np = q.patches[mem[0]];
      for (int c = 0; c < int(np.circles.size()); ++c)
        for (int i = 0; i < std::max(1, int(np.circles[c].marked.size())); ++i)
          interval_map[{mem[0], c, i}] = CompRef{np.id, np.circles[c].id, i};
      out.patches.push_back(std::move(np));
      continue;
    }
    // id and label
    np.id = q.patches[mem[0]].id;
    for (size_t k = 1; k < mem.size(); ++k) np.id += "+" + q.patches[mem[k]].id;
    np.label = q.patches[mem[0]].label;
    for (int p : mem) {
      if (q.patches[p].label.name != np.label.name ||
          q.patches[p].label.dim != np.label.dim)
        throw Error("EndMismatch", "glued patches carry different labels");
    }
    // surviving point ids are kept unless members collide
    std::map<std::string, int> id_count;
    for (int p : mem) {
      for (int c = 0; c < int(q.patches[p].circles.size()); ++c)
        for (int m = 0; m < int(q.patches[p].circles[c].marked.size()); ++m)
          if (!removed.count(detail::PIdx{p, c, m}))
            ++id_count[q.patches[p].circles[c].marked[m].id];
      for (const auto& u : q.patches[p].punctures) ++id_count[u.id];
    }
    auto pname = [&](int p, const std::string& old) {
      if (!merged || id_count[old] <= 1) return old;
      return q.patches[p].id + "." + old;
    };
    for (int p : mem) {
      for (const auto& u : q.patches[p].punctures) {
        np.punctures.push_back({pname(p, u.id), u.dir});
        point_rename[{p, u.id}] = np.punctures.back().id;
      }
    }
    // untouched circles of member patches are copied
    int cidx = 0;
    for (int p : mem)
      for (int c = 0; c < int(q.patches[p].circles.size()); ++c) {
        if (affected_circles.count({p, c})) continue;
        BoundaryCircle bc = q.patches[p].circles[c];
        bc.id = "g" + std::to_string(cidx++);
        for (auto& m : bc.marked) {
          point_rename[{p, m.id}] = pname(p, m.id);
          m.id = pname(p, m.id);
        }
        for (int i = 0; i < std::max(1, int(bc.marked.size())); ++i)
          interval_map[{p, c, i}] = CompRef{np.id, bc.id, i};
        np.circles.push_back(std::move(bc));
      }
    // rebuilt circles
    if (touched)
      for (const auto& rc : rebuilt[r]) {
        BoundaryCircle bc;
        bc.id = "g" + std::to_string(cidx++);
        for (const auto& v : rc.vertices) {
          const MarkedPoint& old = nav.mp(v);
          point_rename[{v.patch, old.id}] = pname(v.patch, old.id);
          bc.marked.push_back({pname(v.patch, old.id), old.dir, old.width});
        }
        for (int i = 0; i < int(rc.runs.size()); ++i)
          for (const auto& iv : rc.runs[i])
            interval_map[iv] = CompRef{np.id, bc.id, i};
        np.circles.push_back(std::move(bc));
      }
    // genus from the euler bookkeeping
    int chi = 0;
    for (int p : mem) chi += q.patches[p].euler();
    int pairs_here = 0;
    for (int i = 0; i < n; ++i) {
      detail::PIdx m = nav.resolve_mp(ep->strips[i]).value();
      if (find(m.patch) == r) ++pairs_here;
    }
    chi -= pairs_here;
    int b = int(np.circles.size());
    int twog = 2 - b - chi;
    if (twog < 0 || twog % 2 != 0)
      throw Error("InvalidQuilt", "gluing produced an impossible surface");
    np.genus = twog / 2;
    out.patches.push_back(std::move(np));
  }

  // seams: remap and merge
  std::map<std::pair<CompRef, CompRef>, Seam> new_seams;
  std::vector<std::pair<CompRef, CompRef>> seam_order;
  for (const auto& s : q.seams) {
    detail::IIdx ia = nav.resolve_comp(s.a).value();
    detail::IIdx ib = nav.resolve_comp(s.b).value();
    CompRef na = interval_map.at(ia);
    CompRef nb = interval_map.at(ib);
    if (na == nb)
      throw Error("InvalidQuilt", "gluing collapsed a seam onto one component");
    Seam ns = s;
    ns.a = na;
    ns.b = nb;
    auto key = na < nb ? std::make_pair(na, nb) : std::make_pair(nb, na);
    auto it = new_seams.find(key);
    if (it == new_seams.end()) {
      new_seams.emplace(key, std::move(ns));
      seam_order.push_back(key);
    } else {
      // merged partner: orientations must agree
      const Seam& kept = it->second;
      bool same_dir = kept.a == na;
      std::string kept_name = same_dir ? kept.label.rendered() : kept.label.rendered_reverse();
      std::string got_name = ns.label.rendered();
      if (kept_name != got_name)
        throw Error("EndMismatch", "merging seams carry different labels");
    }
  }
  for (const auto& key : seam_order) out.seams.push_back(new_seams.at(key));

  // boundary labels: remap, dropping duplicates on merged components
  std::set<CompRef> labeled;
  for (const auto& bl : q.boundary_labels) {
    detail::IIdx i = nav.resolve_comp(bl.at).value();
    CompRef at = interval_map.at(i);
    if (labeled.count(at)) continue;
    labeled.insert(at);
    BoundaryLabelEntry nb = bl;
    nb.at = at;
    out.boundary_labels.push_back(std::move(nb));
  }

  // end orderings minus the glued pair
  std::map<int, std::string> patch_new_id;
  {
    int pos = 0;
    for (int rt : roots) {
      for (int pmem : members[rt]) patch_new_id[pmem] = out.patches[pos].id;
      ++pos;
    }
  }
  auto remap = [&](const EndRef& rr) {
    int p = nav.patch_index(rr.patch).value();
    EndRef nr;
    nr.patch = patch_new_id[p];
    auto it = point_rename.find({p, rr.point});
    nr.point = it == point_rename.end() ? rr.point : it->second;
    return nr;
  };
  for (const auto& r : q.incoming)
    if (!(r == minus_ref)) out.incoming.push_back(remap(r));
  for (const auto& r : q.outgoing)
    if (!(r == plus_ref)) out.outgoing.push_back(remap(r));

  require_valid(out);
  return out;
}

// ---------------------------------------------------------------------------
// strip shrinking

namespace detail {

struct ShrinkSide {
  bool is_boundary = false;
  int seam = -1;                 // when not boundary
  CompRef partner;               // seam side on the other patch
  int partner_dim = 0;
  std::string read_name;         // correspondence read toward / away from the strip
  bool read_transposed = false;
  std::optional<LagrangianCorrespondence> read_corr;
  std::string boundary_name;     // when boundary
  std::optional<LagrangianSubspace> boundary_lag;
};

}  // namespace detail

/// Removes a width-zero patch (a strip: disk with two marked points, or a
/// closed strip: annulus with two compact seamed circles) and replaces its
/// two seams by their composite. When both labels are concrete the
/// geometric composition must be embedded.
inline std::pair<QuiltedSurface, ShiftRecord> shrink_strip(
    const QuiltedSurface& q, const std::string& patch_id) {
  require_valid(q);
  detail::Nav nav(q);
  auto pi = nav.patch_index(patch_id);
  if (!pi) throw Error("NotAStrip", "no patch " + patch_id);
  const Patch& P = q.patches[*pi];

  bool strip_shape = P.genus == 0 && P.circles.size() == 1 &&
                     P.circles[0].marked.size() == 2 && P.punctures.empty();
  bool annulus_shape = P.genus == 0 && P.circles.size() == 2 &&
                       P.circles[0].marked.empty() && P.circles[1].marked.empty() &&
                       P.punctures.empty();
  if (!strip_shape && !annulus_shape)
    throw Error("NotAStrip", "patch " + patch_id + " is not a strip");

  detail::IIdx side_idx[2];
  if (strip_shape) {
    side_idx[0] = {*pi, 0, 0};
    side_idx[1] = {*pi, 0, 1};
  } else {
    side_idx[0] = {*pi, 0, 0};
    side_idx[1] = {*pi, 1, 0};
  }

  detail::ShrinkSide sides[2];
  for (int k = 0; k < 2; ++k) {
    int s = nav.seam_at(side_idx[k]);
    if (s < 0) {
      sides[k].is_boundary = true;
      const auto* ls = nav.labels_at(side_idx[k]);
      const BoundaryLabelEntry& bl = q.boundary_labels[(*ls)[0]];
      sides[k].boundary_name = bl.name;
      sides[k].boundary_lag = bl.lag;
      continue;
    }
    const Seam& sm = q.seams[s];
    detail::IIdx ia = nav.resolve_comp(sm.a).value();
    bool strip_is_a = ia == side_idx[k];
    const CompRef& other = strip_is_a ? sm.b : sm.a;
    auto op = nav.patch_index(other.patch).value();
    if (op == *pi)
      throw Error("NotAStrip", "strip " + patch_id + " is seamed to itself");
    sides[k].seam = s;
    sides[k].partner = other;
    sides[k].partner_dim = q.patches[op].label.dim;
    // read toward the strip for side 0 and away from it for side 1 happens
    // at composition time; here record the label as seen from the partner
    // (k = 0) or from the strip (k = 1).
    bool from_a = k == 0 ? !strip_is_a : strip_is_a;
    sides[k].read_name = from_a ? sm.label.rendered() : sm.label.rendered_reverse();
    sides[k].read_transposed = !from_a;
    if (sm.label.corr)
      sides[k].read_corr = from_a ? *sm.label.corr : transpose(*sm.label.corr);
  }

  // removing a patch whose sides are both true boundary leaves nothing
  // behind; that is only meaningful when concrete labels witness a
  // transverse intersection, as for the pairing disk over one point
  const bool both_boundary = sides[0].is_boundary && sides[1].is_boundary;
  if (both_boundary && (!sides[0].boundary_lag || !sides[1].boundary_lag))
    throw Error("BothSidesBoundary",
                "both sides of " + patch_id + " are true boundary");

  ShiftRecord shift;
  shift.n = P.label.dim / 2;
  if (strip_shape) {
    Direction d0 = P.circles[0].marked[0].dir, d1 = P.circles[0].marked[1].dir;
    if (d0 == Direction::Outgoing && d1 == Direction::Outgoing)
      shift.d = 1;
    else if (d0 == Direction::Incoming && d1 == Direction::Incoming)
      shift.d = -1;
    else
      shift.d = 0;
  } else {
    shift.d = 0;
  }

  // composite label, as a correspondence from side-0 partner to side-1 partner
  auto compose_names = [](const std::string& a, const std::string& b) {
    return "(" + a + "*" + b + ")";
  };
  std::string in_name =
      sides[0].is_boundary ? sides[0].boundary_name : sides[0].read_name;
  std::string out_name =
      sides[1].is_boundary ? sides[1].boundary_name : sides[1].read_name;
  std::string comp_name = compose_names(in_name, out_name);

  std::optional<LagrangianCorrespondence> comp_corr;
  {
    std::optional<LagrangianCorrespondence> first, second;
    if (sides[0].is_boundary) {
      if (sides[0].boundary_lag)
        first = LagrangianCorrespondence{standard_space(0),
                                         sides[0].boundary_lag->space,
                                         sides[0].boundary_lag->basis};
    } else {
      first = sides[0].read_corr;
    }
    if (sides[1].is_boundary) {
      if (sides[1].boundary_lag)
        second = LagrangianCorrespondence{sides[1].boundary_lag->space,
                                          standard_space(0),
                                          sides[1].boundary_lag->basis};
    } else {
      second = sides[1].read_corr;
    }
    if (first && second) {
      CompositionResult res = compose(*first, *second);
      if (!res.embedded)
        throw Error("CompositionNotEmbedded",
                    res.transverse
                        ? "projection has kernel of dimension " +
                              std::to_string(res.kernel_dim)
                        : "fiber product is not transverse");
      comp_corr = res.composition;
    }
  }

  QuiltedSurface out;
  out.modulus = q.modulus;
  for (const auto& p : q.patches)
    if (p.id != patch_id) out.patches.push_back(p);
  for (int s = 0; s < int(q.seams.size()); ++s)
    if (s != sides[0].seam && s != sides[1].seam) out.seams.push_back(q.seams[s]);
  for (const auto& bl : q.boundary_labels) {
    if (bl.at.patch == patch_id) continue;
    out.boundary_labels.push_back(bl);
  }
  if (both_boundary) {
    // nothing to attach: the patch vanishes together with its labels
  } else if (!sides[0].is_boundary && !sides[1].is_boundary) {
    Seam ns;
    ns.a = sides[0].partner;
    ns.b = sides[1].partner;
    ns.label.name = comp_name;
    ns.label.transposed = false;
    ns.label.dim_pair = {sides[0].partner_dim, sides[1].partner_dim};
    ns.label.corr = comp_corr;
    out.seams.push_back(std::move(ns));
  } else if (sides[0].is_boundary) {
    BoundaryLabelEntry nb;
    nb.at = sides[1].partner;
    nb.name = comp_name;
    nb.dim = sides[1].partner_dim;
    if (comp_corr)
      nb.lag = LagrangianSubspace{comp_corr->target, comp_corr->basis};
    out.boundary_labels.push_back(std::move(nb));
  } else {
    BoundaryLabelEntry nb;
    nb.at = sides[0].partner;
    nb.name = comp_name;
    nb.dim = sides[0].partner_dim;
    if (comp_corr) {
      // correspondence into the point: rows are already the subspace basis
      nb.lag = LagrangianSubspace{comp_corr->source, comp_corr->basis};
    }
    out.boundary_labels.push_back(std::move(nb));
  }

  // end orderings: drop the removed strip's marked points from chain refs
  Ends old_ends = extract_ends(q);
  auto remap = [&](const EndRef& r, Direction d) -> std::optional<EndRef> {
    const auto& bucket =
        d == Direction::Incoming ? old_ends.incoming : old_ends.outgoing;
    for (const auto& e : bucket) {
      if (!(e.order_ref == r)) continue;
      if (e.cylindrical) return r;
      std::vector<EndRef> kept;
      for (const auto& s : e.strips)
        if (s.patch != patch_id) kept.push_back(s);
      if (kept.empty()) return std::nullopt;  // cannot happen for valid shrinks
      if (r.patch != patch_id) return r;
      return kept.front();
    }
    return r;
  };
  for (const auto& r : q.incoming)
    if (auto nr = remap(r, Direction::Incoming)) out.incoming.push_back(*nr);
  for (const auto& r : q.outgoing)
    if (auto nr = remap(r, Direction::Outgoing)) out.outgoing.push_back(*nr);

  require_valid(out);
  return {out, shift};
}

// ---------------------------------------------------------------------------
// combinatorial type

namespace detail {

inline std::string type_encoding(const QuiltedSurface& q, const Nav& nav,
                                 const std::map<std::pair<int, int>, int>& rot) {
  auto rotated = [&](int p, int c, int idx) {
    int k = nav.n_mps(p, c);
    if (k == 0) return idx;
    int r = rot.count({p, c}) ? rot.at({p, c}) : 0;
    return (idx - r + k) % k;
  };
  // canonical seam entries
  struct SeamEnc {
    std::string lo, hi, name;
  };
  std::vector<SeamEnc> seams;
  auto comp_enc = [&](const IIdx& i) {
    return std::to_string(i.patch) + "." + std::to_string(i.circle) + "." +
           std::to_string(rotated(i.patch, i.circle, i.interval));
  };
  std::map<std::string, int> seam_index;  // by lo/hi encoding
  for (const auto& s : q.seams) {
    IIdx ia = nav.resolve_comp(s.a).value();
    IIdx ib = nav.resolve_comp(s.b).value();
    std::string ea = comp_enc(ia), eb = comp_enc(ib);
    SeamEnc e;
    if (ea <= eb) {
      e.lo = ea;
      e.hi = eb;
      e.name = s.label.rendered();
    } else {
      e.lo = eb;
      e.hi = ea;
      e.name = s.label.rendered_reverse();
    }
    seams.push_back(e);
  }
  std::sort(seams.begin(), seams.end(), [](const SeamEnc& a, const SeamEnc& b) {
    return std::tie(a.lo, a.hi, a.name) < std::tie(b.lo, b.hi, b.name);
  });
  std::map<std::string, std::string> seam_desc;  // component enc -> desc
  for (int i = 0; i < int(seams.size()); ++i) {
    seam_desc[seams[i].lo] = "S" + std::to_string(i);
    seam_desc[seams[i].hi] = "S" + std::to_string(i);
  }
  std::map<std::string, std::string> label_desc;
  for (const auto& bl : q.boundary_labels) {
    IIdx i = nav.resolve_comp(bl.at).value();
    label_desc[comp_enc(i)] = "B(" + bl.name + ")";
  }

  std::string out;
  for (int p = 0; p < int(q.patches.size()); ++p) {
    const Patch& pa = q.patches[p];
    out += "P(g" + std::to_string(pa.genus) + ",d" + std::to_string(pa.label.dim) +
           "," + pa.label.name + "){";
    for (int c = 0; c < int(pa.circles.size()); ++c) {
      out += "C[";
      int k = nav.n_mps(p, c);
      int r = rot.count({p, c}) ? rot.at({p, c}) : 0;
      for (int j = 0; j < k; ++j) {
        const MarkedPoint& m = pa.circles[c].marked[(j + r) % k];
        out += m.dir == Direction::Incoming ? "i" : "o";
        IIdx iv{p, c, (j + r) % k};
        std::string e = comp_enc(iv);
        out += seam_desc.count(e) ? seam_desc[e] : label_desc[e];
        out += ";";
      }
      if (k == 0) {
        IIdx iv{p, c, 0};
        std::string e = comp_enc(iv);
        out += seam_desc.count(e) ? seam_desc[e] : label_desc[e];
      }
      out += "]";
    }
    out += "U[";
    for (const auto& u : pa.punctures)
      out += u.dir == Direction::Incoming ? "i" : "o";
    out += "]}";
  }
  for (int i = 0; i < int(seams.size()); ++i)
    out += "S" + std::to_string(i) + "=" + seams[i].lo + "~" + seams[i].hi + ":" +
           seams[i].name + ";";
  auto end_enc = [&](const EndRef& rr) {
    if (auto e = nav.resolve_mp(rr)) {
      return "E" + std::to_string(e->patch) + "." + std::to_string(e->circle) +
             "." + std::to_string(rotated(e->patch, e->circle, e->mp));
    }
    auto p = nav.patch_index(rr.patch).value();
    auto u = nav.resolve_puncture(rr).value();
    return "Y" + std::to_string(p) + "." + std::to_string(u);
  };
  out += "IN[";
  for (const auto& r : q.incoming) out += end_enc(r) + ";";
  out += "]OUT[";
  for (const auto& r : q.outgoing) out += end_enc(r) + ";";
  out += "]N" + std::to_string(q.modulus);
  return out;
}

}  // namespace detail

/// Canonical encoding of the combinatorial structure: stored orderings are
/// kept, cyclic rotations of each circle's marked points are normalized to
/// the lexicographically minimal encoding, seams are side-sorted, labels
/// appear by name. Widths are excluded (they deform freely).
inline std::string combinatorial_type(const QuiltedSurface& q) {
  require_valid(q);
  detail::Nav nav(q);
  std::vector<std::pair<int, int>> rot_circles;
  long long combos = 1;
  for (int p = 0; p < int(q.patches.size()); ++p)
    for (int c = 0; c < int(q.patches[p].circles.size()); ++c)
      if (nav.n_mps(p, c) > 1) {
        rot_circles.push_back({p, c});
        combos *= nav.n_mps(p, c);
      }
  std::map<std::pair<int, int>, int> rot;
  if (combos <= 1 << 18) {
    std::string best;
    std::vector<int> idx(rot_circles.size(), 0);
    while (true) {
      for (size_t i = 0; i < rot_circles.size(); ++i) rot[rot_circles[i]] = idx[i];
      std::string e = detail::type_encoding(q, nav, rot);
      if (best.empty() || e < best) best = std::move(e);
      int i = int(rot_circles.size()) - 1;
      while (i >= 0 &&
             ++idx[i] == nav.n_mps(rot_circles[i].first, rot_circles[i].second))
        idx[i--] = 0;
      if (i < 0) break;
    }
    if (best.empty()) best = detail::type_encoding(q, nav, rot);
    return best;
  }
  // fallback: per-circle local minimization
  for (auto [p, c] : rot_circles) {
    int k = nav.n_mps(p, c);
    int best_r = 0;
    std::string best;
    for (int r = 0; r < k; ++r) {
      rot[{p, c}] = r;
      std::string e = detail::type_encoding(q, nav, rot);
      if (best.empty() || e < best) {
        best = std::move(e);
        best_r = r;
      }
    }
    rot[{p, c}] = best_r;
  }
  return detail::type_encoding(q, nav, rot);
}

inline bool combinatorial_eq(const QuiltedSurface& a, const QuiltedSurface& b) {
  return combinatorial_type(a) == combinatorial_type(b);
}

/// Patch connectivity through seams.
inline bool connected(const QuiltedSurface& q) {
  if (q.patches.empty()) return true;
  detail::Nav nav(q);
  std::vector<int> group(q.patches.size());
  for (size_t i = 0; i < group.size(); ++i) group[i] = int(i);
  std::function<int(int)> find = [&](int x) {
    return group[x] == x ? x : group[x] = find(group[x]);
  };
  for (const auto& s : q.seams) {
    auto ia = nav.resolve_comp(s.a), ib = nav.resolve_comp(s.b);
    if (ia && ib) group[find(ia->patch)] = find(ib->patch);
  }
  int r0 = find(0);
  for (size_t i = 1; i < group.size(); ++i)
    if (find(int(i)) != r0) return false;
  return true;
}

}  // namespace quiltkit
