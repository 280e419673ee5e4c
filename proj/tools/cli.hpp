#pragma once

// Scenario runner behind the `entlab` executable. One JSON config per run,
// one JSON report out. Kept header-only so tests can call run() in-process.

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "entlab/entlab.hpp"
#include "entlab/io.hpp"
#include "entlab/verify.hpp"

namespace entlab::cli {

using io::json;

enum ExitCode : int { kOk = 0, kValidation = 1, kConsistency = 2, kIo = 3 };

struct Options {
  std::string task;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<std::string> out_path;
};

inline const std::vector<std::string>& tasks() {
  static const std::vector<std::string> t{"entropy",     "q-entropy", "mutual-info", "reconstruct",
                                          "info-bundle", "capacity",  "verify-suite"};
  return t;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Consistency: return kConsistency;
    case ErrorCode::Io: return kIo;
    default: return kValidation;
  }
}

namespace detail {

inline constexpr double kDefaultOrderingTol = 1e-7;

inline BlockStructure algebra_of(const json& cfg) { return io::structure_from_json(io::require(cfg, "algebra")); }

inline DensityState state_of(const json& cfg) {
  const BlockStructure a = algebra_of(cfg);
  const json& s = io::require(cfg, "state");
  if (s.is_string()) {
    const std::string name = s.get<std::string>();
    if (name == "tracial") return tracial_state(a);
    if (name == "uniform") return uniform_state(a);
    io::config_error("unknown state preset '" + name + "'");
  }
  return io::state_from_json(s, a);
}

inline double parameter_of(const json& j, double fallback) {
  return j.contains("parameter") ? j.at("parameter").get<double>() : fallback;
}

inline Channel channel_of(const json& cfg) {
  const json& c = io::require(cfg, "channel");
  if (!c.contains("preset")) return io::channel_from_json(c);
  const std::string name = c.at("preset").get<std::string>();
  if (name == "identity") return Channel::identity(algebra_of(cfg));
  if (name == "depolarizing") return depolarizing_qubit(parameter_of(c, 1.0));
  if (name == "dephasing") return dephasing_qubit(parameter_of(c, 1.0));
  if (name == "amplitude_damping") return amplitude_damping(parameter_of(c, 1.0));
  if (name == "completely_depolarizing") {
    const BlockStructure a = algebra_of(cfg);
    if (a.block_count() != 1) io::config_error("completely_depolarizing needs a single-block algebra");
    return completely_depolarizing(a.rank());
  }
  io::config_error("unknown channel preset '" + name + "'");
}

struct CompoundInput {
  CompoundState omega;
  std::optional<Decomposition> decomposition;
};

inline CompoundInput compound_of(const json& cfg) {
  const json& c = io::require(cfg, "compound");
  if (c.is_string()) {
    if (c.get<std::string>() != "standard") io::config_error("compound preset must be \"standard\"");
    return {standard_compound(state_of(cfg)), std::nullopt};
  }
  if (c.contains("omega")) return {io::compound_from_json(c), std::nullopt};
  if (c.contains("amplitude")) return {compound_from_amplitude(io::amplitude_from_json(c.at("amplitude"))), std::nullopt};
  if (c.contains("decomposition")) {
    Decomposition dec = io::decomposition_from_json(c.at("decomposition"));
    CompoundState omega = cfg.contains("algebra") ? d_compound(dec, algebra_of(cfg)) : d_compound(dec);
    return {std::move(omega), std::move(dec)};
  }
  io::config_error("compound needs one of: omega, amplitude, decomposition, or \"standard\"");
}

inline SamplerConfig sampler_of(const json& cfg) {
  return cfg.contains("sampler") ? io::sampler_from_json(cfg.at("sampler")) : SamplerConfig{};
}

inline double ordering_tol_of(const json& cfg) {
  if (cfg.contains("tolerances") && cfg.at("tolerances").contains("ordering"))
    return cfg.at("tolerances").at("ordering").get<double>();
  return kDefaultOrderingTol;
}

inline json spectrum_json(const RVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// Each task returns (result, one-line summary).
using TaskResult = std::pair<json, std::string>;

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << v;
  return s.str();
}

inline TaskResult task_entropy(const json& cfg) {
  const DensityState rho = state_of(cfg);
  const double s = vn_entropy(rho);
  return {json{{"value", s}, {"spectrum", spectrum_json(herm_eigenvalues(rho.full()))}},
          "S(rho) = " + fmt(s) + " nats"};
}

inline TaskResult task_q_entropy(const json& cfg) {
  const DensityState rho = state_of(cfg);
  const EntropyReport h = q_entropy(rho);
  json r = io::report_to_json(h);
  r["von_neumann"] = vn_entropy(rho);
  r["dimension"] = rho.structure().dimension();
  return {r, "H(rho) = " + fmt(h.value) + " nats"};
}

inline TaskResult task_mutual_info(const json& cfg) {
  CompoundInput in = compound_of(cfg);
  CompoundState omega = cfg.contains("channel") ? apply_to_compound(channel_of(cfg), in.omega) : in.omega;
  const EntropyReport info = mutual_information(omega);
  const EntropyReport direct = mutual_information_direct(omega);
  if (info.finite != direct.finite || (info.finite && std::abs(info.value - direct.value) > 1e-8)) {
    fail(ErrorCode::Consistency, "mutual information routes disagree");
  }
  json r{{"mutual_information", io::report_to_json(info)},
         {"relative_entropy_route", io::report_to_json(direct)},
         {"disentanglement", disentanglement(omega)},
         {"conditional_q_entropy", io::report_to_json(conditional_q_entropy(omega))}};
  if (in.decomposition) {
    const Classification c = classify(*in.decomposition);
    r["classification"] = json{{"class", std::string(to_string(c.cls))},
                               {"all_pure", c.all_pure},
                               {"orthogonal", c.orthogonal},
                               {"max_overlap", c.max_overlap},
                               {"commuting", c.commuting},
                               {"max_commutator", c.max_commutator}};
  }
  return {r, "I(omega) = " + (info.finite ? fmt(info.value) : std::string("inf")) + " nats"};
}

inline TaskResult task_reconstruct(const json& cfg) {
  const AmplitudeOperator u = io::amplitude_from_json(io::require(cfg, "amplitude"));
  const EntanglingOperator kappa = entangling_from_amplitude(u);
  const CompoundState omega = compound_from_amplitude(u);
  const Marginals m = marginals(omega);
  const double residual = verify::reconstruction_residual(u, kappa);
  const double sigma_dev = max_abs(kappa.sigma() - transpose_tilde(m.b.full()));
  const double rho_dev = max_abs(kappa.rho() - m.a.full());
  if (std::max({residual, sigma_dev, rho_dev}) > 1e-9) {
    fail(ErrorCode::Consistency, "reconstructed entangling operator does not reproduce the compound state");
  }
  json r{{"kappa", io::matrix_to_json(kappa.matrix())},
         {"dim_f", kappa.dim_f()},
         {"dim_g", kappa.dim_g()},
         {"dim_h", kappa.dim_h()},
         {"sigma", io::matrix_to_json(kappa.sigma())},
         {"rho", io::matrix_to_json(kappa.rho())},
         {"state_residual", residual},
         {"sigma_residual", sigma_dev},
         {"rho_residual", rho_dev},
         {"strong_defect", strong_orthogonality_defect(kappa, std::nullopt)}};
  if (cfg.contains("basis")) r["weak_defect"] = weak_orthogonality_defect(kappa, io::matrix_from_json(cfg.at("basis")));
  return {r, "kappa " + std::to_string(kappa.dim_f() * kappa.dim_h()) + "x" + std::to_string(kappa.dim_g()) +
                 ", residual " + fmt(residual)};
}

inline TaskResult task_info_bundle(const json& cfg) {
  const SamplerConfig sc = sampler_of(cfg);
  const InfoBundle b = info_bundle(state_of(cfg), channel_of(cfg), sc, ordering_tol_of(cfg));
  return {io::bundle_to_json(b, sc), "I_q = " + fmt(b.iq) + ", I_d = " + fmt(b.id) + ", I_o = " + fmt(b.io)};
}

inline CapacityKind kind_of(const json& cfg) {
  const std::string k = cfg.contains("kind") ? cfg.at("kind").get<std::string>() : "D";
  if (k == "Q" || k == "q") return CapacityKind::Q;
  if (k == "D" || k == "d") return CapacityKind::D;
  if (k == "O" || k == "o") return CapacityKind::O;
  io::config_error("capacity kind must be Q, D or O");
}

inline TaskResult task_capacity(const json& cfg) {
  const SamplerConfig sc = sampler_of(cfg);
  const CapacityKind kind = kind_of(cfg);
  const CapacityEstimate est = capacity_estimate(channel_of(cfg), kind, sc);
  const char* label = kind == CapacityKind::Q ? "Q" : kind == CapacityKind::D ? "D" : "O";
  return {json{{"kind", label},
               {"value", est.value},
               {"witness", est.witness},
               {"argmax", io::state_to_json(est.argmax)},
               {"config", io::sampler_to_json(sc)}},
          std::string("C_") + label + " >= " + fmt(est.value) + " nats (" + est.witness + ")"};
}

inline TaskResult task_verify_suite(const json& cfg) {
  const SamplerConfig sc = sampler_of(cfg);
  verify::Budget budget;
  budget.seed = sc.seed;
  budget.sampler_samples = cfg.contains("sampler") && cfg.at("sampler").contains("samples") ? sc.samples : 200;
  if (cfg.contains("verify") && cfg.at("verify").contains("instances"))
    budget.instances = cfg.at("verify").at("instances").get<int>();
  if (budget.instances < 1) io::config_error("verify.instances must be positive");

  json props = json::array();
  int failed = 0;
  for (const auto& p : verify::run_battery(budget)) {
    if (!p.passed) ++failed;
    props.push_back(json{{"name", p.name},
                         {"passed", p.passed},
                         {"worst", p.worst},
                         {"threshold", p.threshold},
                         {"instances", p.instances}});
  }
  json r{{"properties", props}, {"failed", failed}, {"passed", failed == 0}};
  return {r, std::to_string(props.size() - failed) + "/" + std::to_string(props.size()) + " properties passed"};
}

inline TaskResult dispatch(const std::string& task, const json& cfg) {
  if (task == "entropy") return task_entropy(cfg);
  if (task == "q-entropy") return task_q_entropy(cfg);
  if (task == "mutual-info") return task_mutual_info(cfg);
  if (task == "reconstruct") return task_reconstruct(cfg);
  if (task == "info-bundle") return task_info_bundle(cfg);
  if (task == "capacity") return task_capacity(cfg);
  if (task == "verify-suite") return task_verify_suite(cfg);
  io::config_error("unknown task '" + task + "'");
}

inline json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    io::config_error(std::string("config is not valid JSON: ") + e.what());
  }
}

// Applies flag overrides so the report records what was actually run.
inline json effective_config(json cfg, const Options& opt) {
  if (!cfg.is_object()) io::config_error("config must be a JSON object");
  if (cfg.contains("task") && cfg.at("task") != opt.task)
    io::config_error("config task '" + cfg.at("task").dump() + "' conflicts with requested task '" + opt.task + "'");
  cfg["task"] = opt.task;
  if (opt.seed || opt.samples) {
    json& s = cfg["sampler"];
    if (s.is_null()) s = json::object();
    if (opt.seed) s["seed"] = *opt.seed;
    if (opt.samples) s["samples"] = *opt.samples;
  }
  if (opt.tol) {
    if (!(*opt.tol > 0.0)) io::config_error("--tol must be positive");
    cfg["tolerances"]["ordering"] = *opt.tol;
  }
  return cfg;
}

inline json error_json(std::string_view code, const std::string& message, int exit_code) {
  return json{{"schema_version", io::kSchemaVersion},
              {"error", json{{"code", code}, {"message", message}}},
              {"exit_code", exit_code}};
}

}  // namespace detail

/// Runs one scenario. The report goes to opt.out_path or `out`; errors and
/// the one-line summary go to `err`.
inline int run(const Options& opt, std::ostream& out, std::ostream& err,
               const std::function<std::string()>& clock = utc_timestamp) {
  int code = kOk;
  std::string error_code, message;
  try {
    const json cfg = detail::effective_config(detail::read_config(opt.config_path), opt);
    auto [result, summary] = detail::dispatch(opt.task, cfg);
    const json report{{"schema_version", io::kSchemaVersion},
                      {"task", opt.task},
                      {"result", std::move(result)},
                      {"config", cfg},
                      {"timestamp", clock()}};
    const std::string text = report.dump(2) + "\n";
    if (opt.out_path) {
      std::ofstream f(*opt.out_path, std::ios::binary | std::ios::trunc);
      if (!f || !(f << text) || !f.flush()) fail(ErrorCode::Io, "cannot write report '" + *opt.out_path + "'");
    } else {
      out << text;
    }
    err << "entlab " << opt.task << ": " << summary << "\n";
    if (opt.task == "verify-suite" && !report.at("result").at("passed").get<bool>()) return kConsistency;
    return kOk;
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    error_code = to_string(e.code());
    message = e.what();
  } catch (const json::exception& e) {
    code = kValidation;
    error_code = "config";
    message = e.what();
  } catch (const std::exception& e) {
    code = kConsistency;
    error_code = "internal";
    message = e.what();
  }
  err << detail::error_json(error_code, message, code).dump() << "\n";
  return code;
}

}  // namespace entlab::cli
