#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "chnorm/normcalc.hpp"
#include "chnorm/verify.hpp"

namespace chnorm {

using nlohmann::json;

// Channel JSON schema:
// {"d_in": int, "d_out": int, "kraus": [[[re, im], ...row...], ...matrix...],
//  "name": optional string, "seed": optional int}
// Complex numbers are [re, im] pairs; matrices are row-major.

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw std::invalid_argument("matrix_from_json: expected an array of rows");
  const auto rows = j.size();
  const auto cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      const json& z = j[i][k];
      if (!z.is_array() || z.size() != 2)
        throw std::invalid_argument("matrix_from_json: complex entries are [re, im] pairs");
      m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

inline json channel_to_json(const QuantumChannel& ch,
                            const std::optional<std::string>& name = std::nullopt,
                            const std::optional<std::uint64_t>& seed = std::nullopt) {
  json j;
  j["d_in"] = ch.d_in;
  j["d_out"] = ch.d_out;
  json kraus = json::array();
  for (const Matrix& f : ch.kraus) kraus.push_back(matrix_to_json(f));
  j["kraus"] = std::move(kraus);
  if (name) j["name"] = *name;
  if (seed) j["seed"] = *seed;
  return j;
}

inline QuantumChannel channel_from_json(const json& j) {
  if (!j.contains("d_in") || !j.contains("d_out") || !j.contains("kraus"))
    throw std::invalid_argument("channel_from_json: missing d_in/d_out/kraus");
  int d_in = j["d_in"].get<int>();
  int d_out = j["d_out"].get<int>();
  std::vector<Matrix> ops;
  for (const json& m : j["kraus"]) ops.push_back(matrix_from_json(m));
  return QuantumChannel(d_in, d_out, std::move(ops));
}

inline json estimate_to_json(const NormEstimate& est, bool include_certificate = true) {
  json j;
  j["value"] = est.value;
  j["restarts_agreeing"] = est.restarts_agreeing;
  j["converged"] = est.converged;
  if (include_certificate) j["certificate"] = matrix_to_json(est.certificate);
  return j;
}

/// Report as JSON. Wall time is informational and varies run to run, so it is
/// excluded by default to keep equal-seed outputs byte-identical.
inline json report_to_json(const VerificationReport& rep, bool include_wall_time = false) {
  json j;
  j["identity_name"] = rep.identity_name;
  j["seed"] = rep.seed;
  json insts = json::array();
  for (const auto& i : rep.instances) {
    json ji;
    ji["channel"] = i.channel;
    if (!i.p.empty()) ji["p"] = i.p;
    if (!i.q.empty()) ji["q"] = i.q;
    ji["lhs"] = i.lhs;
    ji["rhs"] = i.rhs;
    ji["abs_diff"] = i.abs_diff;
    ji["rel_diff"] = i.rel_diff;
    ji["tolerance"] = i.tolerance;
    ji["passed"] = i.passed;
    if (!i.note.empty()) ji["note"] = i.note;
    insts.push_back(std::move(ji));
  }
  j["instances"] = std::move(insts);
  j["summary"] = {{"total", rep.total()},
                  {"passed", rep.passed()},
                  {"max_rel_diff", rep.max_rel_diff()}};
  if (include_wall_time) j["wall_time_s"] = rep.wall_time_s;
  return j;
}

inline PNorm pnorm_from_string(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return PNorm::infinity();
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad Schatten index '" + s + "'");
  return PNorm(v);
}

}  // namespace chnorm
