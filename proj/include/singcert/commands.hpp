#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "singcert/certify.hpp"
#include "singcert/poly.hpp"

namespace singcert {

// Exit codes: 0 success/Certified, 1 NotCertified (and failed verdicts),
// 2 parse/usage, 3 dimension mismatch, 4 NotStabilized.
enum ExitCode : int {
  kExitOk = 0,
  kExitNotCertified = 1,
  kExitParse = 2,
  kExitDimension = 3,
  kExitNotStabilized = 4,
};

struct RunConfig {
  double rank_tol = 1e-8;
  double res_tol = 1e-6;
  std::uint64_t seed = 0;
  int kmax = 12;
  DVariant d_variant = DVariant::paper;
  std::optional<double> gamma_override;
  bool json = false;

  CertifyConfig certify() const {
    return CertifyConfig{rank_tol, res_tol, d_variant, gamma_override};
  }
};

struct CommandResult {
  nlohmann::json report;
  std::string text;
  int exit_code = kExitOk;
};

std::string read_file(const std::string& path);
CVector load_point(const std::string& path);
PolySystem load_system(const std::string& path);

CommandResult cmd_analyze(const std::string& system_path, const std::string& point_path,
                          const RunConfig& cfg);
CommandResult cmd_dual(const std::string& system_path, const std::string& point_path,
                       const RunConfig& cfg);
CommandResult cmd_deflate(const std::string& system_path, const std::string& point_path,
                          const RunConfig& cfg);
CommandResult cmd_separation(const std::string& system_path, const std::string& point_path,
                             const RunConfig& cfg);
CommandResult cmd_certify(const std::string& system_path, const std::string& point_path,
                          const RunConfig& cfg);
CommandResult cmd_corpus(const std::string& dir, const RunConfig& cfg);

// Renders a result for the terminal (text or JSON per cfg.json) with the
// wall-time field filled in.
std::string render(const CommandResult& r, const RunConfig& cfg, double wall_ms);

}  // namespace singcert
