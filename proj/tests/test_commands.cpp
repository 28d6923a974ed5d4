#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace singcert;
using namespace singcert::test;
using nlohmann::json;

namespace {

std::string sys_path(const std::string& name) { return corpus_file(name, "system.txt"); }
std::string pt_path(const std::string& name) { return corpus_file(name, "point.json"); }

}  // namespace

TEST_CASE("cmd_analyze: cubes summary") {
  RunConfig cfg;
  CommandResult res = cmd_analyze(sys_path("cyclic_cubes"), pt_path("cyclic_cubes"), cfg);
  CHECK(res.exit_code == kExitOk);
  CHECK(res.report["dual"]["kappa"] == 3);
  CHECK(res.report["dual"]["rho"] == 4);
  CHECK(res.report["dual"]["mu"] == 11);
  CHECK(res.report["verdict"] == "SimpleMultiple");
  CHECK(res.report["multiplicity_floor_holds"] == true);
}

TEST_CASE("cmd_analyze: shifted cubes and regular roots") {
  RunConfig cfg;
  CommandResult res = cmd_analyze(sys_path("shifted_cubes"), pt_path("shifted_cubes"), cfg);
  CHECK(res.report["dual"]["kappa"] == 3);
  CHECK(res.report["dual"]["mu"] == 8);
  CHECK(res.report["verdict"] == "SimpleMultiple");

  res = cmd_analyze(sys_path("regular_pt"), pt_path("regular_pt"), cfg);
  CHECK(res.report["dual"]["kappa"] == 0);
  CHECK(res.report["dual"]["mu"] == 1);
  CHECK(res.report["verdict"] == "Regular");
}

TEST_CASE("reports round-trip through JSON") {
  RunConfig cfg;
  for (const char* name : {"cyclic_cubes", "simple_double"}) {
    CommandResult res = cmd_analyze(sys_path(name), pt_path(name), cfg);
    json reparsed = json::parse(res.report.dump());
    CHECK(reparsed == res.report);
  }
  CommandResult cert =
      cmd_certify(sys_path("shifted_cubes"), corpus_file("shifted_cubes", "approx_root.json"), cfg);
  CHECK(json::parse(cert.report.dump()) == cert.report);
}

TEST_CASE("same inputs and seed give identical reports") {
  RunConfig cfg;
  cfg.seed = 12345;
  CommandResult a = cmd_certify(sys_path("cyclic_cubes"), pt_path("cyclic_cubes"), cfg);
  CommandResult b = cmd_certify(sys_path("cyclic_cubes"), pt_path("cyclic_cubes"), cfg);
  CHECK(a.report.dump() == b.report.dump());
  cfg.seed = 54321;
  CommandResult c = cmd_deflate(sys_path("cyclic_cubes"), pt_path("cyclic_cubes"), cfg);
  CommandResult d = cmd_deflate(sys_path("cyclic_cubes"), pt_path("cyclic_cubes"), cfg);
  CHECK(c.report.dump() == d.report.dump());
}

TEST_CASE("cmd_certify exit codes") {
  RunConfig cfg;
  CommandResult ok =
      cmd_certify(sys_path("shifted_cubes"), corpus_file("shifted_cubes", "approx_root.json"), cfg);
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.report["certify"]["verdict"] == "Certified");
  CHECK(ok.report["certify"]["zero_count_lower_bound"] == 8);

  CommandResult reg = cmd_certify(sys_path("regular_pt"), pt_path("regular_pt"), cfg);
  CHECK(reg.exit_code == kExitNotCertified);
  CHECK(reg.report["certify"]["verdict"] == "PreconditionFailed");
}

TEST_CASE("cmd_separation with and without gamma override") {
  RunConfig cfg;
  cfg.gamma_override = 11.25;
  CommandResult res = cmd_separation(sys_path("shifted_cubes"), pt_path("shifted_cubes"), cfg);
  double radius = res.report["separation"]["radius"].get<double>();
  CHECK(radius == doctest::Approx(3e-4).epsilon(0.1));
  CHECK(res.report["separation"]["gamma_overridden"] == true);
  CHECK(res.report["config"]["gamma_override"] == 11.25);

  RunConfig plain;
  CommandResult internal =
      cmd_separation(sys_path("shifted_cubes"), pt_path("shifted_cubes"), plain);
  double g = internal.report["separation"]["gamma"].get<double>();
  CHECK(g >= 1.0);
  CHECK(std::isfinite(g));
}

TEST_CASE("command errors surface as typed exceptions") {
  RunConfig cfg;
  CHECK_THROWS_AS(cmd_dual("/nonexistent/system.txt", pt_path("cyclic_cubes"), cfg), ParseError);
  cfg.kmax = 3;
  CHECK_THROWS_AS(cmd_dual(sys_path("cyclic_cubes"), pt_path("cyclic_cubes"), cfg),
                  NotStabilizedError);
  RunConfig cfg2;
  CHECK_THROWS_AS(cmd_analyze(sys_path("cyclic_cubes"), pt_path("two_squares"), cfg2),
                  DimensionError);
}

TEST_CASE("cmd_corpus: full table and empty directory") {
  RunConfig cfg;
  CommandResult res = cmd_corpus(SINGCERT_CORPUS_DIR, cfg);
  CHECK(res.exit_code == kExitOk);
  const json& cases = res.report["cases"];
  CHECK(cases.size() == 8);
  for (const auto& row : cases) {
    INFO("case ", row["name"].get<std::string>());
    CHECK(!row.contains("error"));
    CHECK(row["multiplicity_floor_holds"] == true);
    CHECK(row["expected_mismatches"].empty());
  }

  std::string empty_dir = std::string(SINGCERT_CORPUS_DIR) + "/../build/empty_corpus";
  std::filesystem::create_directories(empty_dir);
  CommandResult none = cmd_corpus(empty_dir, cfg);
  CHECK(none.exit_code == kExitOk);
  CHECK(none.report["cases"].empty());
}

TEST_CASE("cmd_corpus: broken entries are logged and the run continues") {
  std::string dir = std::string(SINGCERT_CORPUS_DIR) + "/../build/broken_corpus";
  std::filesystem::create_directories(dir + "/bad_case");
  std::ofstream(dir + "/bad_case/system.txt") << "vars x; x +";
  std::ofstream(dir + "/bad_case/point.json") << "[[0,0]]";
  std::filesystem::create_directories(dir + "/good_case");
  std::ofstream(dir + "/good_case/system.txt") << "vars x,y; x^2; y + x^2";
  std::ofstream(dir + "/good_case/point.json") << "[[0,0],[0,0]]";
  RunConfig cfg;
  CommandResult res = cmd_corpus(dir, cfg);
  CHECK(res.exit_code == kExitOk);
  REQUIRE(res.report["cases"].size() == 2);
  CHECK(res.report["cases"][0]["name"] == "bad_case");
  CHECK(res.report["cases"][0].contains("error"));
  CHECK(res.report["cases"][1]["mu"] == 2);
}

TEST_CASE("d-variant flows through the commands") {
  RunConfig cfg;
  cfg.d_variant = DVariant::kappa2;
  CommandResult res = cmd_certify(sys_path("shifted_cubes"), pt_path("shifted_cubes"), cfg);
  CHECK(res.report["certify"]["d_variant"] == "kappa2");
  double d2 = res.report["certify"]["d"].get<double>();
  RunConfig plain;
  CommandResult base = cmd_certify(sys_path("shifted_cubes"), pt_path("shifted_cubes"), plain);
  CHECK(d2 < base.report["certify"]["d"].get<double>());  // kappa^2 term shrinks the root
}
