#pragma once

#include <json.hpp>

#include "quiltkit/engine.hpp"
#include "quiltkit/graded.hpp"
#include "quiltkit/maslov.hpp"
#include "quiltkit/quilt.hpp"

namespace quiltkit {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// scalars and matrices: rationals as "p/q" strings, integers as numbers
// when they fit and strings otherwise

inline Json to_json(const Rational& r) { return rational_to_string(r); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error("ParseError", "expected a rational");
}

inline Json to_json(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() &&
      v <= std::numeric_limits<long long>::max())
    return Json(v.convert_to<long long>());
  return Json(v.str());
}

inline Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw Error("ParseError", "expected an integer");
}

inline Json to_json(const QMat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline QMat qmat_from_json(const Json& j, int expect_rows = -1) {
  if (!j.is_array()) throw Error("ParseError", "expected a matrix");
  int rows = int(j.size());
  int cols = rows > 0 ? int(j[0].size()) : 0;
  if (rows == 0 && expect_rows > 0) {
    // an empty matrix with known row count: columns zero
    return QMat(expect_rows, 0);
  }
  QMat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (int(j[r].size()) != cols)
      throw Error("ParseError", "ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(r, c) = rational_from_json(j[r][c]);
  }
  return m;
}

inline Json to_json(const ZMat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ZMat zmat_from_json(const Json& j, int rows, int cols) {
  ZMat m(rows, cols);
  if (!j.is_array() || int(j.size()) != rows)
    throw Error("ParseError", "matrix row count mismatch");
  for (int r = 0; r < rows; ++r) {
    if (int(j[r].size()) != cols)
      throw Error("ParseError", "matrix column count mismatch");
    for (int c = 0; c < cols; ++c) m(r, c) = int_from_json(j[r][c]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// symplectic data

inline Json to_json(const SymplecticSpace& v) {
  Json j;
  j["dim"] = v.dim;
  j["form"] = to_json(v.form);
  return j;
}

inline SymplecticSpace space_from_json(const Json& j) {
  if (j.contains("form")) {
    SymplecticSpace v{j.at("dim").get<int>(),
                      qmat_from_json(j.at("form"), j.at("dim").get<int>())};
    v.check();
    return v;
  }
  int dim = j.at("dim").get<int>();
  if (dim % 2 != 0) throw Error("ParseError", "odd space dimension");
  return standard_space(dim / 2);
}

inline Json to_json(const LagrangianCorrespondence& l) {
  Json j;
  j["source_dim"] = l.source.dim;
  j["target_dim"] = l.target.dim;
  j["basis"] = to_json(l.basis);
  if (l.source != standard_space(l.source.dim / 2))
    j["source_form"] = to_json(l.source.form);
  if (l.target != standard_space(l.target.dim / 2))
    j["target_form"] = to_json(l.target.form);
  return j;
}

inline LagrangianCorrespondence correspondence_from_json(const Json& j) {
  int d0 = j.at("source_dim").get<int>();
  int d1 = j.at("target_dim").get<int>();
  if (d0 < 0 || d1 < 0 || d0 % 2 || d1 % 2)
    throw Error("ParseError", "correspondence dimensions must be even");
  SymplecticSpace source = j.contains("source_form")
                               ? SymplecticSpace{d0, qmat_from_json(j.at("source_form"), d0)}
                               : standard_space(d0 / 2);
  SymplecticSpace target = j.contains("target_form")
                               ? SymplecticSpace{d1, qmat_from_json(j.at("target_form"), d1)}
                               : standard_space(d1 / 2);
  QMat basis = qmat_from_json(j.at("basis"), d0 + d1);
  LagrangianCorrespondence l{source, target, basis};
  l.check();
  return l;
}

inline Json to_json(const LagrangianSubspace& l) {
  Json j;
  j["dim"] = l.space.dim;
  j["basis"] = to_json(l.basis);
  if (l.space != standard_space(l.space.dim / 2))
    j["form"] = to_json(l.space.form);
  return j;
}

inline LagrangianSubspace lagrangian_from_json(const Json& j) {
  SymplecticSpace v = space_from_json(j);
  LagrangianSubspace l{v, qmat_from_json(j.at("basis"), v.dim)};
  l.check();
  return l;
}

inline LagrangianLoop loop_from_json(const Json& j) {
  SymplecticSpace v = space_from_json(j);
  LagrangianLoop loop{v, {}};
  for (const auto& s : j.at("samples")) {
    LagrangianSubspace l{v, qmat_from_json(s, v.dim)};
    l.check();
    loop.samples.push_back(std::move(l));
  }
  loop.check();
  return loop;
}

// ---------------------------------------------------------------------------
// graded data

inline Json to_json(const GradedModule& m) {
  Json j;
  j["modulus"] = m.modulus;
  j["ring"] = m.ring == Ring::Z ? "z" : "z2";
  Json basis = Json::array();
  for (const auto& g : m.basis) {
    Json e;
    e["name"] = g.name;
    e["deg"] = g.degree;
    basis.push_back(std::move(e));
  }
  j["basis"] = std::move(basis);
  return j;
}

inline GradedModule module_from_json(const Json& j) {
  GradedModule m;
  m.modulus = j.at("modulus").get<int>();
  std::string ring = j.value("ring", "z");
  if (ring != "z" && ring != "z2") throw Error("ParseError", "ring must be z or z2");
  m.ring = ring == "z" ? Ring::Z : Ring::Z2;
  for (const auto& e : j.at("basis"))
    m.basis.push_back({e.at("name").get<std::string>(), e.at("deg").get<int>()});
  m.check();
  return m;
}

inline Json to_json(const GradedMap& f) {
  Json j;
  j["source"] = to_json(f.source);
  j["target"] = to_json(f.target);
  j["degree"] = f.degree;
  j["matrix"] = to_json(f.matrix);
  return j;
}

inline GradedMap map_from_json(const Json& j) {
  GradedModule src = module_from_json(j.at("source"));
  GradedModule tgt = module_from_json(j.at("target"));
  return GradedMap(src, tgt, j.at("degree").get<int>(),
                   zmat_from_json(j.at("matrix"), tgt.size(), src.size()));
}

inline ChainComplex complex_from_json(const Json& j) {
  GradedModule m = module_from_json(j.at("module"));
  ZMat d = zmat_from_json(j.at("differential"), m.size(), m.size());
  ChainComplex c{m, GradedMap(m, m, 1, std::move(d))};
  c.check();
  return c;
}

// ---------------------------------------------------------------------------
// quilts

inline Json to_json(const CompRef& r) {
  return Json::array({r.patch, r.circle, r.interval});
}

inline CompRef compref_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3)
    throw Error("ParseError", "component reference must be [patch, circle, interval]");
  return CompRef{j[0].get<std::string>(), j[1].get<std::string>(),
                 j[2].get<int>()};
}

inline Json to_json(const EndRef& r) { return Json::array({r.patch, r.point}); }

inline EndRef endref_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error("ParseError", "end reference must be [patch, point]");
  return EndRef{j[0].get<std::string>(), j[1].get<std::string>()};
}

inline Json to_json(const QuiltedSurface& q) {
  Json j;
  j["modulus"] = q.modulus;
  Json patches = Json::array();
  for (const auto& p : q.patches) {
    Json pj;
    pj["id"] = p.id;
    pj["genus"] = p.genus;
    Json lab;
    lab["name"] = p.label.name;
    lab["dim"] = p.label.dim;
    if (!p.label.compact) lab["compact"] = false;
    if (p.label.space) lab["space"] = to_json(*p.label.space);
    pj["label"] = std::move(lab);
    Json circles = Json::array();
    for (const auto& c : p.circles) {
      Json cj;
      cj["id"] = c.id;
      Json marked = Json::array();
      for (const auto& m : c.marked) {
        Json mj;
        mj["id"] = m.id;
        mj["dir"] = dir_str(m.dir);
        mj["width"] = to_json(m.width);
        marked.push_back(std::move(mj));
      }
      cj["marked"] = std::move(marked);
      circles.push_back(std::move(cj));
    }
    pj["circles"] = std::move(circles);
    Json interior = Json::array();
    for (const auto& u : p.punctures) {
      Json uj;
      uj["id"] = u.id;
      uj["dir"] = dir_str(u.dir);
      interior.push_back(std::move(uj));
    }
    pj["interior"] = std::move(interior);
    patches.push_back(std::move(pj));
  }
  j["patches"] = std::move(patches);
  Json seams = Json::array();
  for (const auto& s : q.seams) {
    Json sj;
    sj["a"] = to_json(s.a);
    sj["b"] = to_json(s.b);
    Json lab;
    lab["name"] = s.label.name;
    if (s.label.transposed) lab["transposed"] = true;
    lab["dim_pair"] = Json::array({s.label.dim_pair.first, s.label.dim_pair.second});
    if (s.label.corr) lab["corr"] = to_json(*s.label.corr);
    sj["label"] = std::move(lab);
    seams.push_back(std::move(sj));
  }
  j["seams"] = std::move(seams);
  Json labels = Json::array();
  for (const auto& b : q.boundary_labels) {
    Json bj;
    bj["at"] = to_json(b.at);
    Json lab;
    lab["name"] = b.name;
    lab["dim"] = b.dim;
    if (b.lag) lab["lag"] = to_json(*b.lag);
    bj["label"] = std::move(lab);
    labels.push_back(std::move(bj));
  }
  j["boundary_labels"] = std::move(labels);
  Json order;
  Json in = Json::array(), out = Json::array();
  for (const auto& r : q.incoming) in.push_back(to_json(r));
  for (const auto& r : q.outgoing) out.push_back(to_json(r));
  order["incoming"] = std::move(in);
  order["outgoing"] = std::move(out);
  j["end_order"] = std::move(order);
  return j;
}

inline Direction dir_from_json(const Json& j) {
  std::string s = j.get<std::string>();
  if (s == "in") return Direction::Incoming;
  if (s == "out") return Direction::Outgoing;
  throw Error("ParseError", "direction must be 'in' or 'out'");
}

inline QuiltedSurface quilt_from_json(const Json& j) {
  QuiltedSurface q;
  q.modulus = j.at("modulus").get<int>();
  for (const auto& pj : j.at("patches")) {
    Patch p;
    p.id = pj.at("id").get<std::string>();
    p.genus = pj.value("genus", 0);
    const Json& lab = pj.at("label");
    p.label.name = lab.at("name").get<std::string>();
    p.label.dim = lab.at("dim").get<int>();
    p.label.compact = lab.value("compact", true);
    if (lab.contains("space")) p.label.space = space_from_json(lab.at("space"));
    for (const auto& cj : pj.value("circles", Json::array())) {
      BoundaryCircle c;
      c.id = cj.at("id").get<std::string>();
      for (const auto& mj : cj.value("marked", Json::array())) {
        MarkedPoint m;
        m.id = mj.at("id").get<std::string>();
        m.dir = dir_from_json(mj.at("dir"));
        m.width = mj.contains("width") ? rational_from_json(mj.at("width"))
                                       : Rational(1);
        c.marked.push_back(std::move(m));
      }
      p.circles.push_back(std::move(c));
    }
    for (const auto& uj : pj.value("interior", Json::array()))
      p.punctures.push_back({uj.at("id").get<std::string>(),
                             dir_from_json(uj.at("dir"))});
    q.patches.push_back(std::move(p));
  }
  for (const auto& sj : j.value("seams", Json::array())) {
    Seam s;
    s.a = compref_from_json(sj.at("a"));
    s.b = compref_from_json(sj.at("b"));
    const Json& lab = sj.at("label");
    s.label.name = lab.at("name").get<std::string>();
    s.label.transposed = lab.value("transposed", false);
    const Json& dp = lab.at("dim_pair");
    s.label.dim_pair = {dp.at(0).get<int>(), dp.at(1).get<int>()};
    if (lab.contains("corr"))
      s.label.corr = correspondence_from_json(lab.at("corr"));
    q.seams.push_back(std::move(s));
  }
  for (const auto& bj : j.value("boundary_labels", Json::array())) {
    BoundaryLabelEntry b;
    b.at = compref_from_json(bj.at("at"));
    const Json& lab = bj.at("label");
    b.name = lab.at("name").get<std::string>();
    b.dim = lab.at("dim").get<int>();
    if (lab.contains("lag")) b.lag = lagrangian_from_json(lab.at("lag"));
    q.boundary_labels.push_back(std::move(b));
  }
  const Json& order = j.value("end_order", Json::object());
  for (const auto& r : order.value("incoming", Json::array()))
    q.incoming.push_back(endref_from_json(r));
  for (const auto& r : order.value("outgoing", Json::array()))
    q.outgoing.push_back(endref_from_json(r));
  return q;
}

// ---------------------------------------------------------------------------
// reports

inline Json to_json(const std::vector<Violation>& v) {
  Json viol = Json::array(), warn = Json::array();
  for (const auto& x : v) {
    Json e;
    e["code"] = x.code;
    e["message"] = x.message;
    (x.warning ? warn : viol).push_back(std::move(e));
  }
  Json j;
  j["violations"] = std::move(viol);
  j["warnings"] = std::move(warn);
  return j;
}

inline Json to_json(const QuiltedEnd& e) {
  Json j;
  j["direction"] = e.dir == Direction::Incoming ? "in" : "out";
  j["cyclic"] = e.cyclic;
  j["cylindrical"] = e.cylindrical;
  Json strips = Json::array();
  for (const auto& s : e.strips) strips.push_back(to_json(s));
  j["strips"] = std::move(strips);
  Json widths = Json::array();
  for (const auto& w : e.widths) widths.push_back(to_json(w));
  j["widths"] = std::move(widths);
  Json labels = Json::array();
  for (const auto& l : e.labels) {
    Json lj;
    lj["kind"] = l.is_boundary ? "boundary" : "seam";
    lj["name"] = l.name;
    labels.push_back(std::move(lj));
  }
  j["labels"] = std::move(labels);
  j["key"] = e.key();
  return j;
}

inline Json to_json(const Ends& e) {
  Json j;
  Json in = Json::array(), out = Json::array();
  for (const auto& x : e.incoming) in.push_back(to_json(x));
  for (const auto& x : e.outgoing) out.push_back(to_json(x));
  j["incoming"] = std::move(in);
  j["outgoing"] = std::move(out);
  return j;
}

inline Json to_json(const CompositionResult& r) {
  Json j;
  j["transverse"] = r.transverse;
  j["embedded"] = r.embedded;
  j["kernel_dim"] = r.kernel_dim;
  if (r.composition) j["composition"] = to_json(*r.composition);
  return j;
}

inline Json error_json(const Error& e) {
  Json j;
  j["error"] = e.code();
  if (e.code() != "NonIntegralIndex") j["detail"] = e.what();
  return j;
}

// ---------------------------------------------------------------------------
// expressions

inline QuiltExpression expression_from_json(const Json& j) {
  std::string op = j.at("op").get<std::string>();
  if (op == "leaf") return QuiltExpression::leaf(j.at("fixture").get<std::string>());
  if (op == "union")
    return QuiltExpression::unite(expression_from_json(j.at("left")),
                                  expression_from_json(j.at("right")));
  if (op == "glue")
    return QuiltExpression::glue_ends(expression_from_json(j.at("child")),
                                      endref_from_json(j.at("minus")),
                                      endref_from_json(j.at("plus")));
  throw Error("ParseError", "expression op must be leaf, union, or glue");
}

}  // namespace quiltkit
