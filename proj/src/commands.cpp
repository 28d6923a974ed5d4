#include "singcert/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "singcert/deflation.hpp"
#include "singcert/dualspace.hpp"

namespace singcert {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CVector load_point(const std::string& path) {
  json j = json::parse(read_file(path));
  if (!j.is_array()) throw ParseError("point file must be a JSON array of [re, im] pairs", 0, 0);
  CVector x(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("point entry " + std::to_string(i) + " is not an [re, im] pair", 0, 0);
    x(i) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return x;
}

PolySystem load_system(const std::string& path) { return parse_system(read_file(path)); }

namespace {

json complex_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

json point_json(const CVector& x) {
  json a = json::array();
  for (int i = 0; i < x.size(); ++i) a.push_back(complex_json(x(i)));
  return a;
}

json sigma_json(const Eigen::VectorXd& s) {
  json a = json::array();
  for (int i = 0; i < s.size(); ++i) a.push_back(s(i));
  return a;
}

json config_json(const RunConfig& cfg) {
  json j{{"rank_tol", cfg.rank_tol},
         {"res_tol", cfg.res_tol},
         {"seed", cfg.seed},
         {"kmax", cfg.kmax},
         {"d_variant", to_string(cfg.d_variant)}};
  if (cfg.gamma_override) j["gamma_override"] = *cfg.gamma_override;
  return j;
}

json base_report(const std::string& command, const PolySystem& f, const CVector& x,
                 const RunConfig& cfg) {
  return json{{"command", command},
              {"system", f.to_string()},
              {"point", point_json(x)},
              {"config", config_json(cfg)}};
}

json dual_json(const DualInvariants& di) {
  return json{{"kappa", di.breadth},        {"rho", di.depth},
              {"mu", di.multiplicity},      {"dims", di.dims},
              {"residual", di.residual},    {"residual_ok", di.residual_ok},
              {"isolated", "assumed (stabilization is a heuristic witness only)"}};
}

json cert_json(const CertReport& r) {
  json j{{"verdict", to_string(r.verdict)},
         {"kappa", r.kappa},
         {"residual", r.residual},
         {"gamma", r.gamma},
         {"gamma_overridden", r.gamma_overridden},
         {"d", r.d},
         {"d_variant", to_string(r.d_variant)},
         {"d_residual", r.d_residual},
         {"radius_separation", r.radius_separation},
         {"radius_cluster", r.radius_cluster},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"zero_count_lower_bound", r.zero_count_lower_bound},
         {"norm_H", r.norm_H},
         {"sigma_min_AmH", r.sigma_min_AmH},
         {"isolation", "not verified (reported as an assumption)"}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.gamma_per_k.empty()) {
    json pk = json::array();
    for (const auto& e : r.gamma_per_k)
      pk.push_back(json{{"k", e.k}, {"bound", e.bound}, {"root", e.root}});
    j["gamma_per_k"] = pk;
  }
  if (r.kappa >= 1 && r.reason != "Regular") {
    j["precondition"] = json{
        {"sigma_n_minus_kappa", std::isinf(r.precond_sigma) ? json("inf") : json(r.precond_sigma)},
        {"sigma_threshold", r.precond_sigma_threshold},
        {"ls_residuals", r.precond_ls_residuals},
        {"ls_thresholds", r.precond_ls_thresholds}};
  }
  return j;
}

int verdict_exit(CertVerdict v) { return v == CertVerdict::Certified ? kExitOk : kExitNotCertified; }

std::string text_kv(const json& j, int indent = 0) {
  std::ostringstream out;
  std::string pad(indent, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_object()) {
      out << pad << it.key() << ":\n" << text_kv(it.value(), indent + 2);
    } else {
      out << pad << it.key() << ": " << it.value().dump() << "\n";
    }
  }
  return out.str();
}

}  // namespace

CommandResult cmd_analyze(const std::string& system_path, const std::string& point_path,
                          const RunConfig& cfg) {
  PolySystem f = load_system(system_path);
  CVector x = load_point(point_path);
  if (f.size() != f.nvars)
    throw DimensionError("analyze requires a square system (" + std::to_string(f.size()) +
                         " equations in " + std::to_string(f.nvars) + " variables)");
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  CommandResult res;
  res.report = base_report("analyze", f, x, cfg);

  DualConfig dcfg{cfg.rank_tol, cfg.res_tol, cfg.kmax};
  DualInvariants di = dual_invariants(f, x, dcfg);
  res.report["dual"] = dual_json(di);

  RootClassification cls = is_simple_multiple(f, x, cfg.seed, cfg.rank_tol, cfg.res_tol);
  res.report["verdict"] = to_string(cls.verdict);
  res.report["kappa"] = cls.kappa;
  KernelFrame frame = numerical_kernel(jacobian(f, x), cfg.rank_tol);
  res.report["jacobian_sigma"] = sigma_json(frame.sigma);
  if (cls.kappa >= 1) {
    CharacterizationMatrix cm =
        build_characterization_matrix(f, x, cls.frame, cfg.rank_tol);
    res.report["B_sigma_min"] = cm.sigma_min;
    res.report["B_det_abs"] = cm.det_abs;
    res.report["zero_count_floor"] = (1LL << di.breadth);
    res.report["multiplicity_floor_holds"] = di.multiplicity >= (1LL << di.breadth);
  }
  res.exit_code = kExitOk;
  return res;
}

CommandResult cmd_dual(const std::string& system_path, const std::string& point_path,
                       const RunConfig& cfg) {
  PolySystem f = load_system(system_path);
  CVector x = load_point(point_path);
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  CommandResult res;
  res.report = base_report("dual", f, x, cfg);
  DualConfig dcfg{cfg.rank_tol, cfg.res_tol, cfg.kmax};
  DualInvariants di = dual_invariants(f, x, dcfg);
  res.report["dual"] = dual_json(di);
  res.exit_code = kExitOk;
  return res;
}

CommandResult cmd_deflate(const std::string& system_path, const std::string& point_path,
                          const RunConfig& cfg) {
  PolySystem f = load_system(system_path);
  CVector x = load_point(point_path);
  if (f.size() != f.nvars) throw DimensionError("deflate requires a square system");
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  CommandResult res;
  res.report = base_report("deflate", f, x, cfg);
  KernelFrame base = numerical_kernel(jacobian(f, x), cfg.rank_tol);
  res.report["kappa"] = base.kappa;
  if (base.kappa == 0) {
    res.report["verdict"] = "Regular";
    res.report["note"] = "kappa = 0: deflation vacuous";
    res.exit_code = kExitOk;
    return res;
  }
  KernelFrame frame = random_orthonormal_kernel_basis(base, cfg.seed);
  DeflationStep step = deflate_once(f, x, frame, cfg.seed, cfg.rank_tol);
  CharacterizationMatrix cm = build_characterization_matrix(f, x, frame, cfg.rank_tol);
  EquivalenceReport eq = one_step_equivalence_check(f, x, 20, cfg.seed, cfg.rank_tol);
  json lam = json::array();
  for (int i = 0; i < step.lambda1.size(); ++i) lam.push_back(complex_json(step.lambda1(i)));
  res.report["deflation"] = json{{"one_step", step.full_rank},
                                 {"Dg_sigma_min", step.sigma_min},
                                 {"Dg_sigma_max", step.sigma_max},
                                 {"lambda1", lam},
                                 {"B_full_rank", cm.full_rank},
                                 {"B_sigma_min", cm.sigma_min},
                                 {"B_det_abs", cm.det_abs}};
  res.report["equivalence"] = json{{"trials", eq.trials},
                                   {"agreements", eq.agreements},
                                   {"both_full", eq.both_full},
                                   {"borderline", eq.borderline},
                                   {"vacuous", eq.vacuous}};
  res.exit_code = kExitOk;
  return res;
}

CommandResult cmd_separation(const std::string& system_path, const std::string& point_path,
                             const RunConfig& cfg) {
  PolySystem f = load_system(system_path);
  CVector x = load_point(point_path);
  if (f.size() != f.nvars) throw DimensionError("separation requires a square system");
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  CommandResult res;
  res.report = base_report("separation", f, x, cfg);
  SeparationResult sep = separation_bound(f, x, cfg.seed, cfg.certify());
  res.report["separation"] = json{{"kappa", sep.kappa},
                                  {"gamma", sep.gamma},
                                  {"gamma_overridden", sep.gamma_overridden},
                                  {"d", sep.d},
                                  {"radius", sep.radius}};
  res.exit_code = kExitOk;
  return res;
}

CommandResult cmd_certify(const std::string& system_path, const std::string& point_path,
                          const RunConfig& cfg) {
  PolySystem f = load_system(system_path);
  CVector x = load_point(point_path);
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  CommandResult res;
  res.report = base_report("certify", f, x, cfg);
  CertReport rep = certify_cluster(f, x, cfg.seed, cfg.certify());
  res.report["certify"] = cert_json(rep);
  res.exit_code = verdict_exit(rep.verdict);
  return res;
}

CommandResult cmd_corpus(const std::string& dir, const RunConfig& cfg) {
  CommandResult res;
  res.report = json{{"command", "corpus"}, {"dir", dir}, {"config", config_json(cfg)}};
  json rows = json::array();
  std::vector<fs::path> cases;
  if (!fs::is_directory(dir)) throw ParseError("corpus dir not found: " + dir, 0, 0);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory() && fs::exists(entry.path() / "system.txt")) cases.push_back(entry.path());
  std::sort(cases.begin(), cases.end());
  for (const auto& c : cases) {
    json row{{"name", c.filename().string()}};
    try {
      PolySystem f = load_system((c / "system.txt").string());
      CVector x = load_point((c / "point.json").string());
      DualConfig dcfg{cfg.rank_tol, cfg.res_tol, cfg.kmax};
      DualInvariants di = dual_invariants(f, x, dcfg);
      row["kappa"] = di.breadth;
      row["rho"] = di.depth;
      row["mu"] = di.multiplicity;
      bool multiple = di.multiplicity > 1;
      row["multiplicity_floor_holds"] =
          !multiple || di.multiplicity >= (1LL << di.breadth);  // mu >= 2^kappa
      RootClassification cls = is_simple_multiple(f, x, cfg.seed, cfg.rank_tol, cfg.res_tol);
      row["verdict"] = to_string(cls.verdict);
      if (cls.kappa >= 1) {
        EquivalenceReport eq = one_step_equivalence_check(f, x, 20, cfg.seed, cfg.rank_tol);
        row["one_step"] = eq.both_full == eq.trials;
        row["equivalence_agreement"] =
            std::to_string(eq.agreements) + "/" + std::to_string(eq.trials);
        CertReport cert = certify_cluster(f, x, cfg.seed, cfg.certify());
        row["certified"] = cert.verdict == CertVerdict::Certified;
      } else {
        row["one_step"] = false;
        row["equivalence_agreement"] = "vacuous";
        row["certified"] = false;
      }
      if (fs::exists(c / "expected.json")) {
        json exp = json::parse(read_file((c / "expected.json").string()));
        json mism = json::array();
        for (auto it = exp.begin(); it != exp.end(); ++it)
          if (row.contains(it.key()) && row[it.key()] != it.value())
            mism.push_back(json{{"field", it.key()},
                                {"expected", it.value()},
                                {"got", row[it.key()]}});
        row["expected_mismatches"] = mism;
      }
    } catch (const std::exception& e) {
      row["error"] = e.what();  // per-entry failures logged, run continues
    }
    rows.push_back(row);
  }
  res.report["cases"] = rows;
  res.exit_code = kExitOk;
  return res;
}

namespace {

std::string cell(const json& row, const char* key) {
  if (!row.contains(key)) return "-";
  const json& v = row[key];
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string corpus_table(const json& report) {
  const char* cols[] = {"name",     "kappa",    "rho",      "mu",       "multiplicity_floor_holds",
                        "one_step", "equivalence_agreement",   "verdict",  "certified"};
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"name", "kappa", "rho", "mu", "mu>=2^k", "one-step", "thm2", "verdict", "cert"});
  for (const auto& c : report["cases"]) {
    std::vector<std::string> row;
    for (const char* k : cols) row.push_back(cell(c, k));
    if (c.contains("error")) row.back() = "error: " + c["error"].get<std::string>();
    if (c.contains("expected_mismatches") && !c["expected_mismatches"].empty())
      row.back() += " MISMATCH";
    rows.push_back(row);
  }
  std::vector<size_t> width(rows[0].size(), 0);
  for (const auto& row : rows)
    for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream out;
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << row[i] << std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::string render(const CommandResult& r, const RunConfig& cfg, double wall_ms) {
  json out = r.report;
  out["wall_time_ms"] = wall_ms;
  if (cfg.json) return out.dump(2) + "\n";
  std::ostringstream text;
  if (out.contains("command")) text << "== singcert " << out["command"].get<std::string>() << " ==\n";
  if (out["command"] == "corpus") {
    text << corpus_table(out);
    return text.str();
  }
  json body = out;
  body.erase("system");
  text << text_kv(body);
  return text.str();
}

}  // namespace singcert
