#include "cvforge/chart_io.hpp"

#include <fstream>
#include <sstream>

#include "cvforge/errors.hpp"
#include "json.hpp"

namespace cvforge {

using nlohmann::json;

namespace {

json jet_terms(const Jet& x) {
  json terms = json::array();
  std::vector<int> a, b;
  for (auto& [k, c] : x.terms()) {
    if (c == cd(0.0)) continue;
    unpack_key(x.context(), k, a, b);
    terms.push_back({{"t", a}, {"tbar", b}, {"re", c.real()}, {"im", c.imag()}});
  }
  return terms;
}

json matrix_entries(const MatrixJet& M) {
  json out = json::array();
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      const Jet& x = M(i, j);
      json terms = jet_terms(x);
      if (terms.empty() && x.exact()) continue;
      json e = {{"row", i}, {"col", j}, {"terms", terms}};
      if (!x.exact()) e["precision"] = x.precision();
      out.push_back(e);
    }
  return out;
}

[[noreturn]] void schema(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::SchemaError, field + ": " + what);
}

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where + "." + key, "missing");
  return *it;
}

int as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) schema(field, "expected an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& field) {
  if (!j.is_number()) schema(field, "expected a number");
  return j.get<double>();
}

std::vector<int> as_exponents(const json& j, int m, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != m) schema(field, "expected " + std::to_string(m) + " exponents");
  std::vector<int> v;
  for (size_t i = 0; i < j.size(); ++i) {
    int e = as_int(j[i], field + "[" + std::to_string(i) + "]");
    if (e < 0 || e > 15) schema(field, "exponent out of range");
    v.push_back(e);
  }
  return v;
}

MatrixJet read_matrix(const json& entries, const JetContext& ctx, int rows, int cols, const std::string& field) {
  if (!entries.is_array()) schema(field, "expected an array of entries");
  MatrixJet M(ctx, rows, cols);
  for (size_t k = 0; k < entries.size(); ++k) {
    const std::string f = field + "[" + std::to_string(k) + "]";
    const json& e = entries[k];
    int r = as_int(member(e, "row", f), f + ".row");
    int c = as_int(member(e, "col", f), f + ".col");
    if (r < 0 || r >= rows || c < 0 || c >= cols) schema(f, "index outside " + std::to_string(rows) + "x" + std::to_string(cols));
    int prec = kExact;
    if (e.contains("precision")) prec = as_int(e["precision"], f + ".precision");
    const json& terms = member(e, "terms", f);
    if (!terms.is_array()) schema(f + ".terms", "expected an array");
    Jet x(ctx);
    for (size_t t = 0; t < terms.size(); ++t) {
      const std::string tf = f + ".terms[" + std::to_string(t) + "]";
      auto a = as_exponents(member(terms[t], "t", tf), ctx.m, tf + ".t");
      auto b = as_exponents(member(terms[t], "tbar", tf), ctx.m, tf + ".tbar");
      cd v(as_double(member(terms[t], "re", tf), tf + ".re"), as_double(member(terms[t], "im", tf), tf + ".im"));
      int deg = 0;
      for (int i = 0; i < ctx.m; ++i) deg += a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)];
      if (deg > ctx.d) schema(tf, "degree exceeds d");
      x.add_term(pack_key(ctx, a, b), v);
    }
    M(r, c) = x.with_precision(prec);
  }
  return M;
}

double mag(const MatrixJet& M) { return M.max_abs(); }

void require_invariant(bool ok, const std::string& name) {
  if (!ok) throw Error(ErrorKind::InvariantViolation, name);
}

}  // namespace

void validate_chart(const ChartBundle& b, double tol) {
  auto small = [&](const MatrixJet& R, double scale) { return R.max_abs() <= tol * (1.0 + scale); };
  if (b.g) require_invariant(is_holomorphic(*b.g, tol), "g holomorphic");
  for (auto& c : b.C) require_invariant(is_holomorphic(c, tol), "C holomorphic");
  if (b.U) require_invariant(is_holomorphic(*b.U, tol), "U holomorphic");
  if (b.V) require_invariant(is_holomorphic(*b.V, tol), "V holomorphic");
  if (b.g) require_invariant(small(*b.g - b.g->transpose(), mag(*b.g)), "g symmetric");
  if (b.h) require_invariant(small(*b.h - b.h->transpose().conj(), mag(*b.h)), "h hermitian");
  if (b.kappa) {
    const MatrixJet& k = *b.kappa;
    require_invariant(small(k * k.conj() - MatrixJet::identity(b.ctx, b.n), mag(k)), "kappa involutive");
  }
  if (b.g && b.h && b.kappa)
    require_invariant(small(*b.h - *b.g * *b.kappa, mag(*b.h)), "h = g(., kappa .)");
}

std::string export_chart(const ChartBundle& b, const FStructure* f) {
  json doc;
  doc["schema"] = kChartSchema;
  doc["m"] = b.ctx.m;
  doc["n"] = b.n;
  doc["d"] = b.ctx.d;
  doc["zorder"] = b.zorder;
  doc["w"] = b.w;
  if (b.tangent) doc["tangent"] = true;
  json t = json::object();
  for (size_t i = 0; i < b.C.size(); ++i) t["C" + std::to_string(i)] = matrix_entries(b.C[i]);
  auto opt = [&](const char* name, const std::optional<MatrixJet>& M) {
    if (M) t[name] = matrix_entries(*M);
  };
  opt("U", b.U);
  opt("V", b.V);
  opt("Q", b.Q);
  opt("g", b.g);
  opt("h", b.h);
  opt("kappa", b.kappa);
  for (size_t i = 0; i < b.gamma10.size(); ++i) t["gamma10_" + std::to_string(i)] = matrix_entries(b.gamma10[i]);
  for (size_t i = 0; i < b.gamma01.size(); ++i) t["gamma01_" + std::to_string(i)] = matrix_entries(b.gamma01[i]);
  if (f) {
    for (size_t i = 0; i < f->mult.size(); ++i) t["mult" + std::to_string(i)] = matrix_entries(f->mult[i]);
    t["e"] = matrix_entries(f->e.as_column());
    t["E"] = matrix_entries(f->E.as_column());
  }
  doc["tensors"] = t;
  return doc.dump(1) + "\n";
}

ChartFile import_chart(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("document: ") + e.what());
  }
  const json& sv = member(doc, "schema", "document");
  if (!sv.is_string() || sv.get<std::string>() != kChartSchema)
    schema("schema", "unsupported version " + sv.dump() + " (expected \"" + kChartSchema + "\")");
  int m = as_int(member(doc, "m", "document"), "m");
  int n = as_int(member(doc, "n", "document"), "n");
  int d = as_int(member(doc, "d", "document"), "d");
  if (m < 1 || m > 8) schema("m", "must be in 1..8");
  if (n < 1) schema("n", "must be positive");
  if (d < 2 || d > 15) schema("d", "must be in 2..15");
  ChartFile out;
  ChartBundle& b = out.bundle;
  b.ctx = JetContext(m, d);
  b.n = n;
  b.zorder = doc.contains("zorder") ? as_int(doc["zorder"], "zorder") : 6;
  b.w = doc.contains("w") ? as_int(doc["w"], "w") : 0;
  if (doc.contains("tangent")) {
    if (!doc["tangent"].is_boolean()) schema("tangent", "expected a boolean");
    b.tangent = doc["tangent"].get<bool>();
  }
  const json& t = member(doc, "tensors", "document");
  if (!t.is_object()) schema("tensors", "expected an object");

  auto indexed = [&](const std::string& prefix, int rows, int cols, std::vector<MatrixJet>& dst) {
    bool any = false;
    for (int i = 0; i < m; ++i) any = any || t.contains(prefix + std::to_string(i));
    if (!any) return;
    for (int i = 0; i < m; ++i) {
      std::string key = prefix + std::to_string(i);
      if (!t.contains(key)) schema("tensors." + key, "missing (all " + std::to_string(m) + " components are required)");
      dst.push_back(read_matrix(t[key], b.ctx, rows, cols, "tensors." + key));
    }
  };
  auto single = [&](const std::string& key, int rows, int cols) -> std::optional<MatrixJet> {
    if (!t.contains(key)) return std::nullopt;
    return read_matrix(t[key], b.ctx, rows, cols, "tensors." + key);
  };

  for (auto it = t.begin(); it != t.end(); ++it) {
    static const char* known[] = {"C", "U", "V", "Q", "g", "h", "kappa", "gamma10_", "gamma01_", "mult", "e", "E"};
    bool ok = false;
    for (const char* k : known) {
      std::string s(k);
      if (!(s == "C" || s == "mult" || s.back() == '_') && it.key() == s) ok = true;
      bool prefixed = s == "C" || s == "mult" || s.back() == '_';
      if (prefixed && it.key().rfind(s, 0) == 0 && it.key().size() > s.size()) {
        std::string rest = it.key().substr(s.size());
        if (rest.find_first_not_of("0123456789") == std::string::npos && std::stoi(rest) < m) ok = true;
      }
    }
    if (!ok) schema("tensors." + it.key(), "unknown tensor");
  }

  indexed("C", n, n, b.C);
  b.U = single("U", n, n);
  b.V = single("V", n, n);
  b.Q = single("Q", n, n);
  b.g = single("g", n, n);
  b.h = single("h", n, n);
  b.kappa = single("kappa", n, n);
  indexed("gamma10_", n, n, b.gamma10);
  indexed("gamma01_", n, n, b.gamma01);

  std::vector<MatrixJet> mult;
  indexed("mult", m, m, mult);
  auto e = single("e", m, 1);
  auto E = single("E", m, 1);
  if (!mult.empty() || e || E) {
    if (mult.empty() || !e || !E) schema("tensors", "an F-manifold needs mult*, e and E together");
    FStructure f;
    f.mult = mult;
    f.e = VectorFieldJet::from_column(*e);
    f.E = VectorFieldJet::from_column(*E);
    out.f = f;
  }
  validate_chart(b);
  return out;
}

ChartFile parse_chart(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return import_chart(ss.str());
}

void write_chart(const std::string& path, const ChartBundle& b, const FStructure* f) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, path + ": cannot write file");
  out << export_chart(b, f);
}

}  // namespace cvforge
