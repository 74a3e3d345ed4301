#include "cvforge/chart_io.hpp"
#include "cvforge/fixtures.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cvforge;
using nlohmann::json;

namespace {

bool same(const MatrixJet& a, const MatrixJet& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j).terms() != b(i, j).terms() || a(i, j).precision() != b(i, j).precision()) return false;
  return true;
}

bool same(const std::optional<MatrixJet>& a, const std::optional<MatrixJet>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}

bool same(const std::vector<MatrixJet>& a, const std::vector<MatrixJet>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

void check_round_trip(const ChartBundle& b) {
  ChartFile back = import_chart(export_chart(b));
  const ChartBundle& r = back.bundle;
  CHECK(r.ctx.m == b.ctx.m);
  CHECK(r.ctx.d == b.ctx.d);
  CHECK(r.n == b.n);
  CHECK(r.w == b.w);
  CHECK(r.zorder == b.zorder);
  CHECK(r.tangent == b.tangent);
  CHECK(same(r.C, b.C));
  CHECK(same(r.U, b.U));
  CHECK(same(r.V, b.V));
  CHECK(same(r.Q, b.Q));
  CHECK(same(r.g, b.g));
  CHECK(same(r.h, b.h));
  CHECK(same(r.kappa, b.kappa));
  CHECK(same(r.gamma10, b.gamma10));
  CHECK(same(r.gamma01, b.gamma01));
  CHECK_FALSE(back.f.has_value());
  // Export is a fixed point after one pass.
  CHECK(export_chart(r) == export_chart(b));
}

std::string error_message(const std::string& text, ErrorKind kind) {
  try {
    import_chart(text);
  } catch (const Error& e) {
    if (e.kind() == kind) return e.what();
    return std::string("wrong kind: ") + e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("round trips are the identity") {
  check_round_trip(example_rank1(0));
  check_round_trip(example_rank1(2, 4));
  check_round_trip(example_semisimple(2, {0.0, 1.0}));
  check_round_trip(example_frobenius2(0.5));
  check_round_trip(sinh_gordon_unfolded(6, 0.15));
}

TEST_CASE("truncated jets keep their precision") {
  ChartBundle sg = sinh_gordon_jet(6, 8, 0.0);
  bool inexact = false;
  for (int i = 0; i < sg.h->rows(); ++i)
    for (int j = 0; j < sg.h->cols(); ++j) inexact = inexact || !(*sg.h)(i, j).exact();
  CHECK(inexact);
  check_round_trip(sg);
}

TEST_CASE("attached F-manifold") {
  ChartBundle b = sinh_gordon_unfolded(6, 0.0);
  FStructure f = induce_f_structure(b, find_primitive(b));
  ChartFile back = import_chart(export_chart(b, &f));
  REQUIRE(back.f.has_value());
  CHECK(same(back.f->mult, f.mult));
  CHECK(same(back.f->e.as_column(), f.e.as_column()));
  CHECK(same(back.f->E.as_column(), f.E.as_column()));
}

TEST_CASE("load-time invariants") {
  json doc = json::parse(export_chart(example_rank1(0)));
  SUBCASE("non-hermitian h") {
    doc["tensors"]["h"][0]["terms"][0]["im"] = 0.5;
    CHECK(error_message(doc.dump(), ErrorKind::InvariantViolation).find("h hermitian") != std::string::npos);
  }
  SUBCASE("non-holomorphic g") {
    doc["tensors"]["g"].push_back({{"row", 0}, {"col", 0}, {"terms", {{{"t", {0}}, {"tbar", {1}}, {"re", 1.0}, {"im", 0.0}}}}});
    CHECK(error_message(doc.dump(), ErrorKind::InvariantViolation).find("g holomorphic") != std::string::npos);
  }
}

TEST_CASE("schema errors name the field") {
  json doc = json::parse(export_chart(example_rank1(0)));
  SUBCASE("unknown version") {
    doc["schema"] = "cvforge/2";
    CHECK(error_message(doc.dump(), ErrorKind::SchemaError).find("schema") != std::string::npos);
  }
  SUBCASE("unknown tensor") {
    doc["tensors"]["C"] = json::array();
    CHECK(error_message(doc.dump(), ErrorKind::SchemaError).find("tensors.C") != std::string::npos);
    doc["tensors"].erase("C");
    doc["tensors"]["C1"] = json::array();
    CHECK(error_message(doc.dump(), ErrorKind::SchemaError).find("tensors.C1") != std::string::npos);
  }
  SUBCASE("bad term") {
    doc["tensors"]["h"][0]["terms"][0]["re"] = "one";
    CHECK(error_message(doc.dump(), ErrorKind::SchemaError).find("tensors.h[0].terms[0].re") != std::string::npos);
  }
  SUBCASE("degree above d") {
    doc["d"] = 2;
    doc["tensors"]["U"][0]["terms"].push_back({{"t", {3}}, {"tbar", {0}}, {"re", 1.0}, {"im", 0.0}});
    CHECK(error_message(doc.dump(), ErrorKind::SchemaError).find("degree exceeds d") != std::string::npos);
  }
  SUBCASE("index outside the matrix") {
    doc["tensors"]["h"][0]["row"] = 3;
    CHECK(error_message(doc.dump(), ErrorKind::SchemaError).find("index outside") != std::string::npos);
  }
  SUBCASE("not json") { CHECK(error_message("{", ErrorKind::SchemaError).find("document") != std::string::npos); }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(parse_chart("/nonexistent/chart.json"), doctest::Contains("cannot open"), Error);
  }
}

TEST_CASE("jet degree outside the supported range") {
  json doc = json::parse(export_chart(example_rank1(0)));
  doc["d"] = 1;
  CHECK(error_message(doc.dump(), ErrorKind::SchemaError).find("d: must be in 2..15") != std::string::npos);
}
