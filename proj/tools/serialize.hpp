#ifndef G2LAB_SERIALIZE_HPP
#define G2LAB_SERIALIZE_HPP

#include <nlohmann/json_fwd.hpp>

#include "g2lab/bell.hpp"
#include "g2lab/hilbert.hpp"
#include "g2lab/stats.hpp"

// JSON wire forms. Complex numbers are [re, im] pairs; matrices are
// row-major lists of pairs under "entries", states under "amplitudes".

namespace g2lab {

nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const StateVector& psi);
nlohmann::json to_json(const ChshReport& report);
nlohmann::json to_json(const DetectionStats& stats);

/// Reads {"dim": n, "entries": [[re,im] x n*n]} at the given config path
/// (used in error messages).
HermitianOperator operator_from_json(const nlohmann::json& j,
                                     const std::string& where);

/// Reads {"dim": n, "amplitudes": [[re,im] x n]} and normalizes.
StateVector state_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace g2lab

#endif
