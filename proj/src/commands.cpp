#include "cvforge/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cvforge/canonical.hpp"
#include "cvforge/chart_io.hpp"
#include "cvforge/correspondences.hpp"
#include "cvforge/errors.hpp"
#include "cvforge/fixtures.hpp"
#include "cvforge/formal_iso.hpp"
#include "cvforge/hyperbolicity.hpp"
#include "json.hpp"

namespace cvforge {

using nlohmann::json;

namespace {

struct Options {
  double tolerance = 1e-9;
  std::string report_path;
  std::string format = "json";
  std::vector<std::string> inputs;
  std::string from = "saito";
  int order = 6;
  bool with_curvature = false;
  std::optional<double> weight;
  std::vector<std::string> direction;
  int samples = 2000;
  std::uint64_t seed = 1;
  bool refine = false;
  std::string fixture_name;
  std::string out_path;
  int degree = 6;
  std::vector<double> offsets;
  int fixture_weight = 0;
  double b0 = 0.0;
};

// Everything a command produces besides the exit code.
struct Outcome {
  std::vector<StructureReport> reports;
  json data = json::object();
};

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < M.cols(); ++j) r.push_back(complex_json(M(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json report_json(const StructureReport& r) {
  json entries = json::array();
  for (auto& e : r.entries) {
    json je = {{"tag", e.tag}, {"residual", e.residual}, {"threshold", e.threshold}, {"pass", e.pass}};
    if (e.lower_bound) je["lower_bound"] = true;
    if (!e.note.empty()) je["note"] = e.note;
    entries.push_back(je);
  }
  return {{"name", r.name}, {"pass", r.pass()}, {"entries", entries}};
}

ChartFile load(const Options& o, size_t i) {
  if (o.inputs.size() <= i) throw Error(ErrorKind::InvalidArgument, "missing chart file argument");
  return parse_chart(o.inputs[i]);
}

Eigen::VectorXcd parse_direction(const std::vector<std::string>& parts, int m) {
  // Each component is "re" or "re:im".
  if (static_cast<int>(parts.size()) != m)
    throw Error(ErrorKind::InvalidArgument, "--direction needs " + std::to_string(m) + " components");
  Eigen::VectorXcd X(m);
  for (int i = 0; i < m; ++i) {
    const std::string& s = parts[static_cast<size_t>(i)];
    auto colon = s.find(':');
    try {
      double re = std::stod(s.substr(0, colon));
      double im = colon == std::string::npos ? 0.0 : std::stod(s.substr(colon + 1));
      X(i) = cd(re, im);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad --direction component '" + s + "'");
    }
  }
  return X;
}

double resolve_weight(const Options& o, const ChartBundle& b, const Primitive& p) {
  if (o.weight) return *o.weight;
  cd d = fit_weight(b, p);
  if (std::abs(d.imag()) > 1e-8 * (1.0 + std::abs(d)))
    throw Error(ErrorKind::NonRealWeight, "fitted weight has imaginary part; pass --weight");
  return d.real();
}

// checked: refuse charts whose axioms fail (AxiomFailure, exit 1).
TepData connection(const ChartBundle& b, const std::string& from, double tol, bool checked) {
  if (from == "saito") return checked ? build_saito_connection(b, b.w, tol) : saito_connection_raw(b, b.w);
  if (from == "cv") return checked ? build_cv_connection(b, b.w, tol) : cv_connection_raw(b, b.w);
  throw Error(ErrorKind::InvalidArgument, "--from must be saito or cv");
}

Outcome cmd_check(const Options& o, StructureReport (*check)(const ChartBundle&, double)) {
  Outcome out;
  out.reports.push_back(check(load(o, 0).bundle, o.tolerance));
  return out;
}

Outcome cmd_check_tep(const Options& o) {
  Outcome out;
  ChartBundle b = load(o, 0).bundle;
  TepData t = connection(b, o.from, o.tolerance, false);
  out.reports.push_back(check_tep(t.conn, t.P, t.w, o.tolerance));
  out.data["flatness_residual"] = flatness_residual(t.conn);
  return out;
}

Outcome cmd_build_connection(const Options& o) {
  Outcome out;
  ChartBundle b = load(o, 0).bundle;
  TepData t = connection(b, o.from, o.tolerance, true);
  StructureReport r;
  r.name = "connection";
  r.add("flatness", flatness_residual(t.conn), pass_threshold(o.tolerance, laurent_magnitude(t.conn)));
  out.reports.push_back(r);
  auto laurent = [](const LaurentJet& L) {
    json terms = json::object();
    for (int p = L.lo(); p <= L.hi(); ++p) terms[std::to_string(p)] = matrix_json(L.coeff(p).constant_term());
    return json{{"lo", L.lo()}, {"hi", L.hi()}, {"base_coefficients", terms}};
  };
  json A = json::array();
  for (auto& L : t.conn.A) A.push_back(laurent(L));
  out.data["from"] = o.from;
  out.data["w"] = t.w;
  out.data["A"] = A;
  out.data["A_z"] = laurent(t.conn.Az);
  out.data["pairing"] = laurent(t.P);
  return out;
}

Outcome cmd_formal_iso(const Options& o) {
  Outcome out;
  ChartBundle saito = load(o, 0).bundle;
  ChartBundle cv = load(o, 1).bundle;
  FormalIso iso = solve_formal_iso(saito, cv, o.order, o.tolerance);
  StructureReport r;
  r.name = "formal_iso";
  json log = json::array();
  for (auto& l : iso.log) {
    r.add("order_" + std::to_string(l.order), l.residual, l.threshold).note =
        l.solvable ? "" : "unsolvable";
    log.push_back({{"order", l.order}, {"precision", l.precision}, {"unknowns", l.unknowns}, {"rank", l.rank},
                   {"kernel_dim", l.kernel_dim}, {"lookahead", l.lookahead}});
  }
  r.add_flag("full_order", iso.achieved >= iso.K, "achieved " + std::to_string(iso.achieved));
  out.reports.push_back(r);
  out.data["achieved"] = iso.achieved;
  out.data["K"] = iso.K;
  out.data["log"] = log;
  out.data["kernel_1_dim"] = iso.kernel_1.size();
  if (iso.achieved >= 1) {
    MatrixJet pot = extract_potential(iso, cv);
    out.reports.push_back(check_harmonic(saito, cv, pot, o.tolerance));
    out.data["potential_base"] = matrix_json(pot.constant_term());
  }
  return out;
}

Outcome cmd_induce_f(const Options& o) {
  Outcome out;
  ChartBundle b = load(o, 0).bundle;
  Primitive p = find_primitive(b);
  FStructure f = induce_f_structure(b, p);
  out.reports.push_back(check_f_manifold(f, o.tolerance));
  PointClass pc = classify_point(f);
  out.data["point_kind"] = point_kind_name(pc.kind);
  out.data["partition"] = pc.partition;
  out.data["sigma_min"] = p.sigma_min;
  out.data["e_base"] = matrix_json(f.e.as_column().constant_term());
  out.data["E_base"] = matrix_json(f.E.as_column().constant_term());
  return out;
}

Outcome cmd_check_frobenius(const Options& o) {
  Outcome out;
  ChartBundle b = load(o, 0).bundle;
  Primitive p = find_primitive(b);
  double d = resolve_weight(o, b, p);
  FrobeniusChart fc = build_frobenius(b, p, d, o.tolerance);
  out.reports.push_back(check_frobenius(fc.f, fc.gM, d, o.tolerance));
  out.data["weight"] = d;
  out.data["gM_base"] = matrix_json(fc.gM.constant_term());
  return out;
}

Outcome cmd_check_cdv(const Options& o) {
  Outcome out;
  ChartFile cf = load(o, 0);
  const ChartBundle& b = cf.bundle;
  if (!b.tangent) throw Error(ErrorKind::InvalidArgument, "check-cdv needs a tangent chart");
  Primitive p = find_primitive(b);
  FStructure f = cf.f ? *cf.f : induce_f_structure(b, p);
  double d = resolve_weight(o, b, p);
  out.reports.push_back(check_cdv(b, f, require(b.g, "g"), cd(d), o.tolerance));
  out.data["weight"] = d;
  out.data["f_source"] = cf.f ? "file" : "induced";
  return out;
}

Outcome cmd_canonical(const Options& o) {
  Outcome out;
  ChartBundle b = load(o, 0).bundle;
  CanonicalData c = canonical_data(b);
  out.reports.push_back(check_canonical_props(c, b, o.tolerance));
  if (o.with_curvature) {
    SubbundleCurvature k = curvature_F(b);
    StructureReport r;
    r.name = "curvature_F";
    double mag = 0.0;
    for (auto& R : k.direct) mag = std::max(mag, R.max_abs());
    r.add("two_ways", k.discrepancy, pass_threshold(o.tolerance, mag));
    out.reports.push_back(r);
    json comps = json::array();
    for (auto& R : k.direct) comps.push_back(matrix_json(R.constant_term()));
    out.data["curvature_base"] = comps;
  }
  out.data["hM_base"] = matrix_json(c.hM.constant_term());
  out.data["gM_base"] = matrix_json(c.gM.constant_term());
  out.data["QM_base"] = matrix_json(c.QM.constant_term());
  return out;
}

Outcome cmd_sectional(const Options& o) {
  Outcome out;
  ChartBundle b = load(o, 0).bundle;
  CanonicalData c = canonical_data(b);
  const int m = b.m();
  StructureReport r;
  r.name = "sectional";
  auto record = [&](const std::string& tag, const Eigen::VectorXcd& X) {
    Sectional s = sectional_curvature(c, b, X);
    r.add(tag + ".two_ways", s.discrepancy, pass_threshold(o.tolerance, std::abs(s.value)));
    r.add(tag + ".nonpositive", std::max(0.0, s.value), o.tolerance);
    return s.value;
  };
  if (!o.direction.empty()) {
    out.data["value"] = record("X", parse_direction(o.direction, m));
  } else {
    // Unit field plus a seeded sweep.
    Eigen::VectorXcd e = c.f.e.as_column().constant_term().col(0);
    out.data["unit_value"] = record("e", e);
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> N(0.0, 1.0);
    double worst = -INFINITY;
    int count = std::max(1, std::min(o.samples, 100));
    for (int k = 0; k < count; ++k) {
      Eigen::VectorXcd X(m);
      for (int i = 0; i < m; ++i) {
        double re = N(rng);
        double im = N(rng);
        X(i) = cd(re, im);
      }
      worst = std::max(worst, record("random_" + std::to_string(k), X));
    }
    out.data["random_max"] = worst;
    out.data["random_count"] = count;
  }
  out.reports.push_back(r);
  return out;
}

Outcome cmd_hyperbolicity(const Options& o) {
  Outcome out;
  ChartBundle b = load(o, 0).bundle;
  K0Estimate k = bound_k0(b, o.samples, o.seed, o.refine);
  StructureReport r;
  r.name = "hyperbolicity";
  r.add_lower("k0_positive", k.k0, 1e-12).note = "sampled estimate";
  out.reports.push_back(r);
  out.data["k0"] = k.k0;
  out.data["argmax"] = matrix_json(k.argmax);
  out.data["argmax_index"] = k.argmax_index;
  out.data["evaluated"] = k.evaluated;
  out.data["sect_range"] = {k.sect_min, k.sect_max};
  out.data["rho_range"] = {k.rho_min, k.rho_max};
  out.data["histogram"] = k.histogram;
  out.data["refined"] = k.refined;
  out.data["samples"] = o.samples;
  out.data["seed"] = o.seed;
  return out;
}

Outcome cmd_fixture(const Options& o) {
  Outcome out;
  ChartBundle b;
  const std::string& n = o.fixture_name;
  if (n == "e1") {
    b = example_rank1(o.fixture_weight, o.degree);
  } else if (n == "e2") {
    b = example_semisimple(2, o.offsets.empty() ? std::vector<double>{0.0, 1.0} : o.offsets, o.degree,
                           o.fixture_weight);
  } else if (n == "f2") {
    b = example_frobenius2(0.0, o.degree);
  } else if (n == "sg") {
    b = sinh_gordon_jet(o.degree, 8, o.b0);
  } else if (n == "sg-unfolded") {
    b = sinh_gordon_unfolded(o.degree, o.b0);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown fixture '" + n + "'");
  }
  if (o.out_path.empty()) throw Error(ErrorKind::InvalidArgument, "--out is required");
  write_chart(o.out_path, b);
  StructureReport r;
  r.name = "fixture";
  bool ok = true;
  std::string note;
  try {
    parse_chart(o.out_path);
  } catch (const Error& e) {
    ok = false;
    note = e.what();
  }
  r.add_flag("reloads", ok, note);
  out.reports.push_back(r);
  out.data["name"] = n;
  out.data["out"] = o.out_path;
  out.data["m"] = b.m();
  out.data["n"] = b.n;
  out.data["d"] = b.ctx.d;
  return out;
}

std::string text_document(const json& doc, const std::vector<StructureReport>& reports) {
  std::ostringstream s;
  s << "command: " << doc["command"].get<std::string>() << "\n";
  s << "status: " << doc["status"].get<std::string>() << "\n";
  if (doc.contains("error")) s << "error: " << doc["error"].get<std::string>() << "\n";
  for (auto& r : reports) s << r.to_text();
  if (doc.contains("data") && !doc["data"].empty())
    for (auto it = doc["data"].begin(); it != doc["data"].end(); ++it) s << it.key() << ": " << it.value().dump() << "\n";
  return s.str();
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"cvforge: chart-level checks for F-manifold, Saito and CV data"};
  app.require_subcommand(1);
  app.add_option("--tolerance", o.tolerance, "relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--report", o.report_path, "write the report here instead of stdout");
  app.add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::function<Outcome()> run;
  std::string command;
  auto sub = [&](const std::string& name, const std::string& help, int charts, std::function<Outcome()> fn) {
    CLI::App* s = app.add_subcommand(name, help);
    if (charts > 0) s->add_option("charts", o.inputs, "chart file(s)")->expected(charts)->required();
    // Global flags are also accepted after the subcommand.
    s->fallthrough();
    s->callback([&, name, fn] {
      command = name;
      run = fn;
    });
    return s;
  };

  sub("check-higgs", "Higgs pair axioms", 1, [&] { return cmd_check(o, check_higgs_pair); });
  sub("check-saito", "Saito structure axioms", 1, [&] { return cmd_check(o, check_saito); });
  sub("check-cv", "CV structure axioms", 1, [&] { return cmd_check(o, check_cv); });
  auto* tep = sub("check-tep", "axioms of the associated connection", 1, [&] { return cmd_check_tep(o); });
  tep->add_option("--from", o.from)->check(CLI::IsMember({"saito", "cv"}));
  auto* bc = sub("build-connection", "associated meromorphic connection", 1, [&] { return cmd_build_connection(o); });
  bc->add_option("--from", o.from)->check(CLI::IsMember({"saito", "cv"}));
  auto* fi = sub("formal-iso", "formal isomorphism between a Saito and a CV chart", 2, [&] { return cmd_formal_iso(o); });
  fi->add_option("--order", o.order)->check(CLI::Range(1, 30));
  sub("induce-f", "F-manifold induced by a primitive section", 1, [&] { return cmd_induce_f(o); });
  auto* fr = sub("check-frobenius", "Frobenius manifold from a Saito chart", 1, [&] { return cmd_check_frobenius(o); });
  fr->add_option("--weight", o.weight);
  auto* cdv = sub("check-cdv", "CDV structure on a tangent chart", 1, [&] { return cmd_check_cdv(o); });
  cdv->add_option("--weight", o.weight);
  auto* can = sub("canonical", "canonical metric data and its properties", 1, [&] { return cmd_canonical(o); });
  can->add_flag("--with-curvature", o.with_curvature);
  auto* sec = sub("sectional", "holomorphic sectional curvature", 1, [&] { return cmd_sectional(o); });
  sec->add_option("--direction", o.direction, "components re or re:im")->delimiter(',');
  sec->add_option("--samples", o.samples, "random directions when no direction is given")->check(CLI::Range(1, 100));
  sec->add_option("--seed", o.seed);
  auto* hyp = sub("hyperbolicity", "sampled curvature bound", 1, [&] { return cmd_hyperbolicity(o); });
  hyp->add_option("--samples", o.samples)->check(CLI::Range(1, 1000000));
  hyp->add_option("--seed", o.seed);
  hyp->add_flag("--refine", o.refine);
  auto* fx = sub("fixture", "write a built-in example chart", 0, [&] { return cmd_fixture(o); });
  fx->add_option("--name", o.fixture_name)->required()->check(CLI::IsMember({"e1", "e2", "f2", "sg", "sg-unfolded"}));
  fx->add_option("--out", o.out_path)->required();
  fx->add_option("--degree", o.degree)->check(CLI::Range(0, 15));
  fx->add_option("--offsets", o.offsets)->delimiter(',');
  fx->add_option("--weight", o.fixture_weight);
  fx->add_option("--b0", o.b0);

  CommandResult res;
  json doc;
  std::vector<StructureReport> reports;
  auto finish = [&](const std::string& status, int code) {
    doc["command"] = command;
    doc["input"] = o.inputs;
    doc["tolerance"] = o.tolerance;
    doc["status"] = status;
    json reps = json::array();
    for (auto& r : reports) reps.push_back(report_json(r));
    doc["reports"] = reps;
    if (!doc.contains("data")) doc["data"] = json::object();
    res.exit_code = code;
    res.report_path = o.report_path;
    res.report = o.format == "text" ? text_document(doc, reports) : doc.dump(1) + "\n";
    return res;
  };

  std::vector<const char*> argv{"cvforge"};
  for (auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    res.diagnostics = app.help();
    res.exit_code = 0;
    return res;
  } catch (const CLI::ParseError& e) {
    res.diagnostics = e.what();
    doc["error"] = std::string("usage: ") + e.what();
    return finish("error", 2);
  }

  try {
    Outcome out = run();
    reports = out.reports;
    doc["data"] = out.data;
    bool pass = true;
    for (auto& r : reports) pass = pass && r.pass();
    return finish(pass ? "pass" : "fail", pass ? 0 : 1);
  } catch (const AxiomFailure& e) {
    reports.push_back(e.report());
    doc["error"] = e.what();
    return finish("fail", 1);
  } catch (const std::exception& e) {
    doc["error"] = e.what();
    return finish("error", 2);
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  CommandResult r = run_command(args);
  if (!r.diagnostics.empty()) err << r.diagnostics << "\n";
  if (r.report.empty()) return r.exit_code;
  if (r.report_path.empty()) {
    out << r.report;
  } else {
    std::ofstream f(r.report_path);
    if (!f) {
      err << "cannot write report to " << r.report_path << "\n";
      out << r.report;
      return 2;
    }
    f << r.report;
  }
  return r.exit_code;
}

}  // namespace cvforge
