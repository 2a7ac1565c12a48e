#include "serialize.hpp"

#include <nlohmann/json.hpp>

namespace g2lab {

using nlohmann::json;

json to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

json to_json(const StateVector& psi) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i)
    amps.push_back({psi.amplitude(i).real(), psi.amplitude(i).imag()});
  return json{{"dim", psi.dim()}, {"amplitudes", std::move(amps)}};
}

json to_json(const ChshReport& report) {
  return json{
      {"bell_norm", report.bell_norm},
      {"landau_residual", report.landau_residual},
      {"commutator_a_norm", report.commutator_a_norm},
      {"commutator_b_norm", report.commutator_b_norm},
      {"permutation_max", report.permutation_max},
      {"permutation_argmax", setting_swap_name(report.permutation_argmax)},
      {"classification", classification_name(report.classification)},
  };
}

json to_json(const DetectionStats& stats) {
  json out{
      {"trials", stats.trials},     {"n1", stats.singles1},
      {"n2", stats.singles2},       {"nc", stats.coincidences},
      {"p1", stats.p1()},           {"p2", stats.p2()},
      {"pc", stats.pc()},           {"se_g2", stats.se_g2()},
  };
  if (const auto g = stats.g2()) {
    out["g2"] = *g;
    out["g2_status"] = "ok";
  } else {
    out["g2"] = nullptr;
    out["g2_status"] = "insufficient-data";
  }
  return out;
}

namespace {

Complex pair_to_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number())
    throw Error(ErrorKind::invalid_config,
                where + ": complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

HermitianOperator operator_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw Error(ErrorKind::invalid_config,
                where + ": expected {dim, entries}");
  const auto dim = j["dim"].get<Eigen::Index>();
  const auto& entries = j["entries"];
  if (dim < 1 || !entries.is_array() ||
      entries.size() != static_cast<std::size_t>(dim * dim))
    throw Error(ErrorKind::invalid_config,
                where + ": entries must hold dim*dim [re, im] pairs");
  ComplexMatrix m(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index jj = 0; jj < dim; ++jj)
      m(i, jj) = pair_to_complex(entries[k++], where);
  try {
    return HermitianOperator(m);
  } catch (const Error& e) {
    throw Error(ErrorKind::invalid_config, where + ": " + e.what());
  }
}

StateVector state_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("amplitudes"))
    throw Error(ErrorKind::invalid_config, where + ": expected {amplitudes}");
  const auto& amps = j["amplitudes"];
  if (!amps.is_array() || amps.empty())
    throw Error(ErrorKind::invalid_config,
                where + ": amplitudes must be a nonempty list");
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = pair_to_complex(amps[i], where);
  try {
    return normalize(v);
  } catch (const Error& e) {
    throw Error(ErrorKind::invalid_config, where + ": " + e.what());
  }
}

}  // namespace g2lab
