#pragma once

// JSON interchange. A matrix is an array of rows, each row an array of
// [re, im] pairs. Doubles are written with shortest round-trip formatting.

#include "json.hpp"

#include <string>
#include <vector>

#include "entlab/capacity.hpp"

namespace entlab::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

[[noreturn]] inline void config_error(const std::string& what) { fail(ErrorCode::Config, what); }

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) config_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty()) {
    config_error("matrix must be a nonempty array of nonempty rows");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.front().size());
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(rows) * cols);
  for (const json& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols) config_error("matrix rows have unequal length");
    for (const json& z : row) {
      if (z.is_number()) {
        entries.emplace_back(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        entries.emplace_back(z[0].get<double>(), z[1].get<double>());
      } else {
        config_error("matrix entries must be [re, im] pairs");
      }
    }
  }
  return make_matrix(rows, cols, entries);
}

inline json structure_to_json(const BlockStructure& a) { return json{{"blocks", a.dims()}}; }

inline BlockStructure structure_from_dims(const json& j) {
  if (!j.is_array()) config_error("block list must be an array of integers");
  std::vector<int> dims;
  for (const json& d : j) {
    if (!d.is_number_integer()) config_error("block dimensions must be integers");
    dims.push_back(d.get<int>());
  }
  return BlockStructure(std::move(dims));
}

inline BlockStructure structure_from_json(const json& j) { return structure_from_dims(require(j, "blocks")); }

inline json state_to_json(const DensityState& rho) {
  json blocks = json::array();
  for (const CMat& b : rho.blocks()) blocks.push_back(matrix_to_json(b));
  return json{{"blocks", blocks}};
}

/// {"blocks": [matrix, ...]} against a known structure.
inline DensityState state_from_json(const json& j, const BlockStructure& a) {
  const json& blocks = require(j, "blocks");
  if (!blocks.is_array()) config_error("state blocks must be an array of matrices");
  std::vector<CMat> mats;
  for (const json& b : blocks) mats.push_back(matrix_from_json(b));
  return DensityState(a, std::move(mats));
}

inline json channel_to_json(const Channel& ch) {
  json kraus = json::array();
  for (const CMat& y : ch.kraus()) kraus.push_back(matrix_to_json(y));
  return json{{"kraus", kraus}, {"in_blocks", ch.structure_in().dims()}, {"out_blocks", ch.structure_out().dims()}};
}

inline Channel channel_from_json(const json& j) {
  const json& kraus = require(j, "kraus");
  if (!kraus.is_array()) config_error("kraus must be an array of matrices");
  std::vector<CMat> ops;
  for (const json& k : kraus) ops.push_back(matrix_from_json(k));
  return Channel(std::move(ops), structure_from_dims(require(j, "in_blocks")),
                 structure_from_dims(require(j, "out_blocks")));
}

inline json instrument_to_json(const Instrument& ins) {
  json ops = json::array();
  for (const CMat& op : ins.ops()) ops.push_back(matrix_to_json(op));
  return json{{"ops", ops}, {"dim_h0", ins.dim_h0()}, {"dim_f", ins.dim_f()}};
}

inline Instrument instrument_from_json(const json& j) {
  std::vector<CMat> ops;
  for (const json& op : require(j, "ops")) ops.push_back(matrix_from_json(op));
  return Instrument(std::move(ops), require(j, "dim_h0").get<int>(), require(j, "dim_f").get<int>());
}

inline DecompositionKind kind_from_string(const std::string& s) {
  if (s == "general") return DecompositionKind::General;
  if (s == "pure") return DecompositionKind::Pure;
  if (s == "orthogonal") return DecompositionKind::Orthogonal;
  config_error("unknown decomposition kind '" + s + "'");
}

inline json decomposition_to_json(const Decomposition& dec) {
  json parts = json::array();
  for (const CMat& p : dec.parts()) parts.push_back(matrix_to_json(p));
  return json{{"parts", parts}, {"kind", std::string(to_string(dec.kind()))}};
}

inline Decomposition decomposition_from_json(const json& j) {
  std::vector<CMat> parts;
  for (const json& p : require(j, "parts")) parts.push_back(matrix_from_json(p));
  const DecompositionKind kind = j.contains("kind") ? kind_from_string(j.at("kind").get<std::string>())
                                                    : DecompositionKind::General;
  return Decomposition(std::move(parts), kind);
}

inline json compound_to_json(const CompoundState& omega) {
  return json{{"omega", matrix_to_json(omega.omega())},
              {"b_blocks", omega.structure_b().dims()},
              {"a_blocks", omega.structure_a().dims()}};
}

inline CompoundState compound_from_json(const json& j) {
  return CompoundState(matrix_from_json(require(j, "omega")), structure_from_dims(require(j, "b_blocks")),
                       structure_from_dims(require(j, "a_blocks")));
}

inline json amplitude_to_json(const AmplitudeOperator& u) {
  return json{{"matrix", matrix_to_json(u.matrix())}, {"dim_g", u.dim_g()}, {"dim_h", u.dim_h()}};
}

inline AmplitudeOperator amplitude_from_json(const json& j) {
  return AmplitudeOperator(matrix_from_json(require(j, "matrix")), require(j, "dim_g").get<int>(),
                           require(j, "dim_h").get<int>());
}

inline json report_to_json(const EntropyReport& r) {
  json j;
  j["value"] = r.finite ? json(r.value) : json("inf");
  j["breakdown"] = json::object();
  for (const auto& [k, v] : r.breakdown) j["breakdown"][k] = v;
  return j;
}

inline EntropyReport report_from_json(const json& j) {
  const json& v = require(j, "value");
  EntropyReport r;
  if (v.is_string()) {
    if (v.get<std::string>() != "inf") config_error("entropy value must be a number or \"inf\"");
    r = EntropyReport::infinite();
  } else {
    r = EntropyReport::of(v.get<double>());
  }
  if (j.contains("breakdown"))
    for (const auto& [k, x] : j.at("breakdown").items()) r.breakdown[k] = x.get<double>();
  return r;
}

inline json sampler_to_json(const SamplerConfig& c) {
  return json{{"seed", c.seed},
              {"samples", c.samples},
              {"ensemble_sizes", c.ensemble_sizes},
              {"state_samples", c.state_samples}};
}

inline SamplerConfig sampler_from_json(const json& j) {
  SamplerConfig c;
  if (!j.is_object()) config_error("sampler must be an object");
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("samples")) c.samples = j.at("samples").get<int>();
  if (j.contains("ensemble_sizes")) c.ensemble_sizes = j.at("ensemble_sizes").get<std::vector<int>>();
  if (j.contains("state_samples")) c.state_samples = j.at("state_samples").get<int>();
  if (c.samples < 1 || c.state_samples < 0) config_error("sampler budgets must be positive");
  for (int m : c.ensemble_sizes)
    if (m < 1) config_error("ensemble sizes must be positive");
  return c;
}

inline json bundle_to_json(const InfoBundle& b, const SamplerConfig& cfg) {
  return json{{"iq", b.iq},
              {"id", b.id},
              {"io", b.io},
              {"witness_id", decomposition_to_json(b.witness_id)},
              {"witness_io", decomposition_to_json(b.witness_io)},
              {"config", sampler_to_json(cfg)}};
}

}  // namespace entlab::io
