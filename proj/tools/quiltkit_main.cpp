// quiltkit: JSON front end for exact quilted-surface computations.
//
// Exit codes: 0 success, 1 validation violations or failed demo checks,
// 2 mathematical precondition failure, 3 I/O or parse failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "quiltkit/quiltkit.hpp"

using namespace quiltkit;

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw Error("ParseError", std::string("bad JSON in ") + path + ": " + e.what());
  }
}

void emit(const Json& j, const std::string& out_path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("IoError", "cannot write " + out_path);
  out << text;
}

int exit_code_for(const Error& e) {
  return e.code() == "IoError" || e.code() == "ParseError" ? 3 : 2;
}

QuiltedSurface load_quilt(const std::string& path) {
  return quilt_from_json(read_json(path));
}

FixtureMap load_fixture_dir(const std::string& dir, int modulus) {
  FixtureMap out;
  DemoData demo = make_demo(modulus);
  out = demo.fixtures;
  out["phi_cylinder"] = fixtures::phi_cylinder(modulus, 2, 4);
  out["psi"] = fixtures::psi_quilt(modulus, 2, 4);
  out["theta"] = fixtures::theta_quilt(modulus, 2, 4);
  out["pop"] = fixtures::pop_quilt(modulus, 2, 4);
  out["s3comp"] = fixtures::s3comp_quilt(modulus, 2, 4);
  out["s1"] = fixtures::s1_quilt(modulus, 2, 4);
  out["s0"] = fixtures::s0_quilt(modulus, 2, 4);
  out["s3p"] = fixtures::s3p_quilt(modulus, 2, 4);
  out["s2p"] = fixtures::s2p_quilt(modulus, 2, 4);
  out["comp_cylinder"] = fixtures::comp_cylinder(modulus, 2, 4, 2);
  out["triangle"] = fixtures::triangle(modulus, 2, 4, 2);
  if (dir.empty()) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    out[entry.path().stem().string()] = load_quilt(entry.path().string());
  }
  return out;
}

Json suite_report(const std::vector<SuiteCheck>& checks, bool* all_pass) {
  Json arr = Json::array();
  *all_pass = true;
  for (const auto& c : checks) {
    Json e;
    e["check"] = c.name;
    e["pass"] = c.pass;
    e["detail"] = c.detail;
    if (!c.pass) *all_pass = false;
    arr.push_back(std::move(e));
  }
  return arr;
}

std::vector<SuiteCheck> demo_closed_surfaces(int N) {
  std::vector<SuiteCheck> out;
  DemoData d = make_demo(N, Ring::Z, 2, {0, 1, 1});
  {
    EvaluationResult r =
        evaluate(QuiltExpression::leaf("disk"), d.fixtures, d.assignment);
    out.push_back({"disk_vanishes", r.map.matrix.is_zero(), "closed disk count"});
  }
  {
    QuiltExpression e = QuiltExpression::glue_ends(
        QuiltExpression::leaf("strip"), EndRef{"P", "in"}, EndRef{"P", "out"});
    EvaluationResult r = evaluate(e, d.fixtures, d.assignment);
    Int chi = euler_characteristic(d.cf);
    bool ok = r.sign_exact && scalar_value(r.map) == chi;
    Int composite = scalar_value(compose(cap_map(d.duality), cup_map(d.duality)));
    ok = ok && composite == chi;
    out.push_back({"annulus_euler", ok,
                   "self-glued strip and pairing composite both give " + chi.str()});
  }
  {
    bool ok = true;
    GradedMap id = identity_map(d.cf);
    for (int g = 1; g <= 4; ++g)
      ok = ok && sphere_with_holes(g, id) == euler_characteristic(d.cf);
    ZMat m(d.cf.size(), d.cf.size());
    for (int i = 0; i < d.cf.size(); ++i) m(i, i) = i + 1;
    GradedMap diag(d.cf, d.cf, 0, std::move(m));
    Int by_hand = 0;
    for (int i = 0; i < d.cf.size(); ++i) {
      Int p = 1;
      for (int k = 0; k < 3; ++k) p *= i + 1;
      by_hand += (d.cf.basis[i].degree % 2 ? -1 : 1) * p;
    }
    ok = ok && sphere_with_holes(4, diag) == by_hand;
    out.push_back({"sphere_with_holes", ok, "trace of powers"});
  }
  return out;
}

std::vector<SuiteCheck> demo_trace_laws(int N) {
  std::vector<SuiteCheck> out;
  DemoData d = make_demo(N, Ring::Z, 2, {0, 1, 1, 2});
  {
    DualityDatum flipped = d.duality;
    for (auto& e : flipped.eps) e = -e;
    GradedMap t1 = algebraic_trace(identity_map(d.cf), {d.cf}, {d.cf}, 0, 0,
                                   d.duality);
    GradedMap t2 = algebraic_trace(identity_map(d.cf), {d.cf}, {d.cf}, 0, 0,
                                   flipped);
    out.push_back({"eps_independence", t1 == t2,
                   "trace unchanged under flipping every eps"});
  }
  {
    // cyclicity on a pair of degree 1 and degree N-1 maps
    ZMat f(d.cf.size(), d.cf.size()), g(d.cf.size(), d.cf.size());
    bool ok = true;
    for (int r = 0; r < d.cf.size(); ++r)
      for (int c = 0; c < d.cf.size(); ++c) {
        if (reduce_mod(d.cf.basis[c].degree + 1, N) == d.cf.basis[r].degree)
          f(r, c) = r + c + 1;
        if (reduce_mod(d.cf.basis[c].degree - 1, N) == d.cf.basis[r].degree)
          g(r, c) = r - c + 2;
      }
    GradedMap fm(d.cf, d.cf, 1, f), gm(d.cf, d.cf, N - 1, g);
    Int lhs = graded_trace(compose(fm, gm));
    Int rhs = graded_trace(compose(gm, fm));
    ok = lhs == -rhs;  // both degrees odd
    out.push_back({"trace_cyclicity", ok, "Tr(fg) = (-1)^{|f||g|} Tr(gf)"});
  }
  return out;
}

std::vector<SuiteCheck> demo_shrink(int N) {
  std::vector<SuiteCheck> out;
  {
    QuiltedSurface tri = fixtures::triangle(N, 2, 4, 2);
    auto [shrunk, shift] = shrink_strip(tri, "S1");
    bool ok = combinatorial_eq(shrunk,
                               fixtures::triangle_composed(N, 2, 2, "(L01*L12)"));
    ok = ok && degree_shift(shrunk) ==
                   reduce_mod(degree_shift(tri) - shift.n * shift.d, N);
    out.push_back({"triangle_shrink", ok, "middle strip composes the seams"});
  }
  {
    QuiltedSurface cap_quilt = fixtures::cap(N, 2, "L0", "L1");
    SymplecticSpace v = standard_space(1);
    QMat x_axis(2, 1), y_axis(2, 1);
    x_axis(0, 0) = 1;
    y_axis(1, 0) = 1;
    cap_quilt.boundary_labels[0].lag = LagrangianSubspace{v, x_axis};
    cap_quilt.boundary_labels[1].lag = LagrangianSubspace{v, y_axis};
    GeneratorAssignment a;
    GradedModule one{N, Ring::Z, {{"x", 0}}};
    GradedModule oned{N, Ring::Z, {{"x'", 1}}};
    Ends ce = extract_ends(cap_quilt);
    a.register_end_module(ce.incoming[0].key(), one);
    a.register_end_module(ce.incoming[1].key(), oned);
    a.assign(cap_quilt, cap_map(make_duality(one, oned, 1)));
    ShrinkTransport t = shrink_transport(cap_quilt, "P", a);
    bool ok = t.quilt.patches.empty() && t.shift.n == 1 && t.shift.d == -1 &&
              t.expected_degree == 0;
    out.push_back({"duality_shrink", ok,
                   "pairing disk over one point shrinks to the empty quilt"});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact combinatorics of quilted surfaces"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  app.add_option("-o,--output", out_path, "write the JSON report here");
  int modulus = 4;
  app.add_option("--modulus", modulus, "grading modulus override");
  std::string ring = "z";
  app.add_option("--ring", ring, "coefficient ring: z or z2")
      ->check(CLI::IsMember({"z", "z2"}));
  std::string fixture_dir;
  if (const char* env = std::getenv("QUILTKIT_FIXTURES")) fixture_dir = env;
  app.add_option("--fixtures", fixture_dir, "directory of quilt fixtures");

  std::string in1, in2, patch_id;
  std::vector<std::string> end_minus, end_plus;

  auto* c_validate = app.add_subcommand("validate", "check quilt invariants");
  c_validate->add_option("quilt", in1)->required();
  auto* c_ends = app.add_subcommand("ends", "extract quilted ends");
  c_ends->add_option("quilt", in1)->required();
  auto* c_euler = app.add_subcommand("euler", "euler characteristics");
  c_euler->add_option("quilt", in1)->required();
  auto* c_degree = app.add_subcommand("degree", "degree shift mod N");
  c_degree->add_option("quilt", in1)->required();
  auto* c_glue = app.add_subcommand("glue", "glue an outgoing end to an incoming end");
  c_glue->add_option("quilt", in1)->required();
  c_glue->add_option("--minus", end_minus, "incoming end: patch point")
      ->expected(2)
      ->required();
  c_glue->add_option("--plus", end_plus, "outgoing end: patch point")
      ->expected(2)
      ->required();
  auto* c_shrink = app.add_subcommand("shrink", "shrink a strip patch");
  c_shrink->add_option("quilt", in1)->required();
  c_shrink->add_option("--patch", patch_id)->required();
  auto* c_type = app.add_subcommand("type", "combinatorial type or equality");
  c_type->add_option("quilt", in1)->required();
  c_type->add_option("other", in2);
  auto* c_maslov = app.add_subcommand("maslov", "loop Maslov index");
  c_maslov->add_option("loop", in1)->required();
  auto* c_kash = app.add_subcommand("kashiwara", "triple index");
  c_kash->add_option("triple", in1)->required();
  auto* c_compose = app.add_subcommand("compose", "geometric composition");
  c_compose->add_option("first", in1)->required();
  c_compose->add_option("second", in2)->required();
  auto* c_cohom = app.add_subcommand("cohomology", "cohomology of a complex");
  c_cohom->add_option("complex", in1)->required();
  auto* c_eval = app.add_subcommand("evaluate", "evaluate a quilt expression");
  c_eval->add_option("expression", in1)->required();
  auto* c_demo = app.add_subcommand("demo", "packaged fixture suites");
  std::string demo_name;
  c_demo->add_option("name", demo_name)
      ->required()
      ->check(CLI::IsMember({"closed_surfaces", "trace_laws", "shrink", "section6"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_validate) {
      QuiltedSurface q = load_quilt(in1);
      auto v = validate(q);
      emit(to_json(v), out_path);
      for (const auto& x : v)
        if (!x.warning) return 1;
      return 0;
    }
    if (*c_ends) {
      QuiltedSurface q = load_quilt(in1);
      emit(to_json(extract_ends(q)), out_path);
      return 0;
    }
    if (*c_euler) {
      QuiltedSurface q = load_quilt(in1);
      EulerReport r = euler(q);
      Json j;
      Json per = Json::object();
      for (const auto& [id, chi] : r.per_patch) per[id] = chi;
      j["per_patch"] = std::move(per);
      j["total"] = r.total;
      emit(j, out_path);
      return 0;
    }
    if (*c_degree) {
      QuiltedSurface q = load_quilt(in1);
      Json j;
      j["degree_shift"] = degree_shift(q);
      j["modulus"] = q.modulus;
      emit(j, out_path);
      return 0;
    }
    if (*c_glue) {
      QuiltedSurface q = load_quilt(in1);
      QuiltedSurface g = glue(q, EndRef{end_minus[0], end_minus[1]},
                              EndRef{end_plus[0], end_plus[1]});
      emit(to_json(g), out_path);
      return 0;
    }
    if (*c_shrink) {
      QuiltedSurface q = load_quilt(in1);
      auto [shrunk, shift] = shrink_strip(q, patch_id);
      Json j;
      j["quilt"] = to_json(shrunk);
      j["shift"] = Json{{"n", shift.n}, {"d", shift.d}};
      emit(j, out_path);
      return 0;
    }
    if (*c_type) {
      QuiltedSurface q = load_quilt(in1);
      Json j;
      j["combinatorial_type"] = combinatorial_type(q);
      if (!in2.empty()) {
        QuiltedSurface q2 = load_quilt(in2);
        j["equal"] = combinatorial_eq(q, q2);
      }
      emit(j, out_path);
      return 0;
    }
    if (*c_maslov) {
      Json j = read_json(in1);
      LagrangianLoop loop = loop_from_json(j);
      LagrangianSubspace ref =
          j.contains("reference")
              ? LagrangianSubspace{loop.space,
                                   qmat_from_json(j.at("reference"), loop.space.dim)}
              : loop.samples[0];
      if (j.contains("reference")) ref.check();
      Json out;
      out["maslov"] = maslov_loop(loop, ref);
      emit(out, out_path);
      return 0;
    }
    if (*c_kash) {
      Json j = read_json(in1);
      SymplecticSpace v = space_from_json(j);
      auto lag = [&](const char* key) {
        LagrangianSubspace l{v, qmat_from_json(j.at(key), v.dim)};
        l.check();
        return l;
      };
      Json out;
      out["kashiwara"] = kashiwara_index(lag("l1"), lag("l2"), lag("l3"));
      emit(out, out_path);
      return 0;
    }
    if (*c_compose) {
      LagrangianCorrespondence a = correspondence_from_json(read_json(in1));
      LagrangianCorrespondence b = correspondence_from_json(read_json(in2));
      emit(to_json(compose(a, b)), out_path);
      return 0;
    }
    if (*c_cohom) {
      ChainComplex c = complex_from_json(read_json(in1));
      auto h = cohomology(c);
      Json arr = Json::array();
      for (const auto& g : h) {
        Json e;
        e["deg"] = g.degree;
        e["free"] = g.free_rank;
        Json tor = Json::array();
        for (const auto& t : g.torsion) tor.push_back(to_json(t));
        e["torsion"] = std::move(tor);
        arr.push_back(std::move(e));
      }
      Json j;
      j["cohomology"] = std::move(arr);
      emit(j, out_path);
      return 0;
    }
    if (*c_eval) {
      QuiltExpression e = expression_from_json(read_json(in1));
      DemoData demo = make_demo(modulus, ring == "z" ? Ring::Z : Ring::Z2);
      FixtureMap fx = load_fixture_dir(fixture_dir, modulus);
      EvaluationResult r = evaluate(e, fx, demo.assignment);
      Json j;
      j["map"] = to_json(r.map);
      j["sign_exact"] = r.sign_exact;
      j["degree_shift"] = degree_shift(r.quilt);
      emit(j, out_path);
      return 0;
    }
    if (*c_demo) {
      std::vector<SuiteCheck> checks;
      if (demo_name == "closed_surfaces") checks = demo_closed_surfaces(modulus);
      if (demo_name == "trace_laws") checks = demo_trace_laws(modulus);
      if (demo_name == "shrink") checks = demo_shrink(modulus);
      if (demo_name == "section6") checks = section6_suite();
      bool all = true;
      Json j;
      j["suite"] = demo_name;
      j["checks"] = suite_report(checks, &all);
      emit(j, out_path);
      return all ? 0 : 1;
    }
  } catch (const Error& e) {
    emit(error_json(e), out_path);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "Internal";
    j["detail"] = e.what();
    emit(j, out_path);
    return 2;
  }
  return 0;
}
