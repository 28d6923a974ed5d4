#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "singcert/commands.hpp"

using namespace singcert;

int main(int argc, char** argv) {
  CLI::App app{"singcert - certification of simple multiple roots of square polynomial systems"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("SINGCERT_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);

  std::string system_path, point_path, corpus_dir, d_variant = "paper";
  double gamma_override = 0.0;
  bool have_override = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--rank-tol", cfg.rank_tol, "relative rank tolerance")->check(CLI::Range(1e-300, 1.0));
    sub->add_option("--res-tol", cfg.res_tol, "residual tolerance")->check(CLI::Range(1e-300, 1.0));
    sub->add_option("--seed", cfg.seed, "random seed (SINGCERT_SEED fallback)");
    sub->add_option("--kmax", cfg.kmax, "dual-space stabilization cap")->check(CLI::PositiveNumber);
    sub->add_option("--d-variant", d_variant, "universal-constant variant: paper | kappa2")
        ->check(CLI::IsMember({"paper", "kappa2"}));
    sub->add_option("--gamma-override", gamma_override,
                    "externally supplied gamma bound (paper-number reproduction)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { have_override = true; });
    sub->add_flag("--json", cfg.json, "emit a JSON report");
  };

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("system", system_path, "system text file")->required();
    sub->add_option("point", point_path, "point JSON file ([re, im] pairs)")->required();
    add_common(sub);
  };

  CLI::App* analyze = app.add_subcommand("analyze", "dual invariants + classification summary");
  add_inputs(analyze);
  CLI::App* dual = app.add_subcommand("dual", "local dual space invariants (kappa, rho, mu)");
  add_inputs(dual);
  CLI::App* deflate = app.add_subcommand("deflate", "one-step deflation and the full-rank characterization check");
  add_inputs(deflate);
  CLI::App* separation = app.add_subcommand("separation", "separation bound at an exact simple multiple root");
  add_inputs(separation);
  CLI::App* certify = app.add_subcommand("certify", "cluster certification at an approximate root");
  add_inputs(certify);
  CLI::App* corpus = app.add_subcommand("corpus", "run a directory of system/point cases");
  corpus->add_option("dir", corpus_dir, "corpus directory")->required();
  add_common(corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  cfg.d_variant = d_variant == "kappa2" ? DVariant::kappa2 : DVariant::paper;
  if (have_override) cfg.gamma_override = gamma_override;

  auto t0 = std::chrono::steady_clock::now();
  try {
    CommandResult res;
    if (analyze->parsed()) res = cmd_analyze(system_path, point_path, cfg);
    else if (dual->parsed()) res = cmd_dual(system_path, point_path, cfg);
    else if (deflate->parsed()) res = cmd_deflate(system_path, point_path, cfg);
    else if (separation->parsed()) res = cmd_separation(system_path, point_path, cfg);
    else if (certify->parsed()) res = cmd_certify(system_path, point_path, cfg);
    else res = cmd_corpus(corpus_dir, cfg);
    double wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    std::cout << render(res, cfg, wall_ms);
    return res.exit_code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const NotStabilizedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotStabilized;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotCertified;
  }
}
