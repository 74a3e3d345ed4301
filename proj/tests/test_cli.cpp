#include <filesystem>
#include <fstream>

#include "cvforge/chart_io.hpp"
#include "cvforge/commands.hpp"
#include "cvforge/fixtures.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cvforge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / ("cvforge_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string fixture(const std::string& name) {
  std::string path = (scratch() / (name + ".json")).string();
  CommandResult r = run_command({"fixture", "--name", name, "--out", path});
  REQUIRE(r.exit_code == 0);
  return path;
}

json report(const CommandResult& r) { return json::parse(r.report); }

}  // namespace

TEST_CASE("check-cv exit codes") {
  std::string e1 = fixture("e1");
  CommandResult ok = run_command({"check-cv", e1});
  CHECK(ok.exit_code == 0);
  CHECK(report(ok)["status"] == "pass");

  // Adding 1e-2 u to U breaks the U relation by exactly 1e-2.
  json doc = json::parse(std::ifstream(e1));
  doc["tensors"]["U"][0]["terms"].push_back({{"t", {1}}, {"tbar", {0}}, {"re", 1e-2}, {"im", 0.0}});
  std::string bad = (scratch() / "e1_perturbed.json").string();
  std::ofstream(bad) << doc.dump();
  CommandResult fail = run_command({"check-cv", bad});
  CHECK(fail.exit_code == 1);
  json rep = report(fail);
  CHECK(rep["status"] == "fail");
  bool found = false;
  for (auto& e : rep["reports"][0]["entries"])
    if (e["tag"] == "U_relation") {
      found = true;
      CHECK(e["pass"] == false);
      CHECK(e["residual"].get<double>() == doctest::Approx(1e-2).epsilon(1e-9));
    }
  CHECK(found);

  CommandResult missing = run_command({"check-cv", (scratch() / "absent.json").string()});
  CHECK(missing.exit_code == 2);
  CHECK(report(missing)["status"] == "error");
  CHECK(report(missing)["error"].get<std::string>().find("SchemaError") != std::string::npos);
}

TEST_CASE("usage errors still emit a report") {
  for (auto args : std::vector<std::vector<std::string>>{{}, {"bogus"}, {"check-cv"}, {"check-cv", "x", "--format", "xml"}}) {
    CommandResult r = run_command(args);
    CHECK(r.exit_code == 2);
    CHECK(report(r)["status"] == "error");
  }
}

TEST_CASE("text format") {
  CommandResult r = run_command({"check-saito", fixture("e2"), "--format", "text"});
  CHECK(r.exit_code == 0);
  CHECK(r.report.rfind("command: check-saito\nstatus: pass\n", 0) == 0);
}

TEST_CASE("reports are byte-identical across runs") {
  std::string sg = fixture("sg-unfolded");
  std::string e2 = fixture("e2");
  std::vector<std::vector<std::string>> runs = {
      {"hyperbolicity", sg, "--samples", "300", "--seed", "11"},
      {"canonical", sg, "--with-curvature"},
      {"sectional", e2},
      {"formal-iso", e2, e2, "--order", "3"},
      {"build-connection", e2, "--from", "cv"},
  };
  for (auto& args : runs) {
    CommandResult a = run_command(args);
    CommandResult b = run_command(args);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.report == b.report);
  }
}

TEST_CASE("subcommands on fixtures") {
  std::string e1 = fixture("e1"), e2 = fixture("e2"), f2 = fixture("f2"), sg = fixture("sg-unfolded");
  CHECK(run_command({"check-higgs", e2}).exit_code == 0);
  CHECK(run_command({"check-tep", e1}).exit_code == 0);
  CHECK(run_command({"check-tep", sg, "--from", "cv"}).exit_code == 0);
  CHECK(run_command({"induce-f", sg}).exit_code == 0);
  CHECK(run_command({"check-frobenius", f2}).exit_code == 0);
  CommandResult cdv = run_command({"check-cdv", sg});
  CHECK(cdv.exit_code == 0);
  CHECK(report(cdv)["data"]["weight"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(run_command({"sectional", e2, "--direction", "1,0:1"}).exit_code == 0);
  CHECK(run_command({"sectional", e2, "--direction", "1"}).exit_code == 2);
  // f2 carries no hermitian metric.
  CHECK(run_command({"canonical", f2}).exit_code == 2);
  // E2 is semisimple, so the sampled bound does not apply.
  CHECK(run_command({"hyperbolicity", e2}).exit_code == 2);
  CommandResult k0 = run_command({"hyperbolicity", sg, "--samples", "200"});
  CHECK(k0.exit_code == 0);
  CHECK(report(k0)["data"]["k0"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("report file") {
  std::string path = (scratch() / "report.json").string();
  std::string e1 = fixture("e1");
  std::vector<const char*> argv{"cvforge", "check-cv", e1.c_str(), "--report", path.c_str()};
  std::ostringstream out, err;
  CHECK(run_cli(static_cast<int>(argv.size()), argv.data(), out, err) == 0);
  CHECK(out.str().empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["command"] == "check-cv");
}
