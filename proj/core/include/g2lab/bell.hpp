#ifndef G2LAB_BELL_HPP
#define G2LAB_BELL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "g2lab/hilbert.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

// The CHSH combination is normalized with the 1/2 prefactor throughout, so
// the compatible ceiling is 1 and the dichotomous ceiling is sqrt(2).

enum class Classification { locally_compatible, doubly_incompatible };

// The four inequivalent placements of the minus sign among the four
// correlators, reached by swapping setting indices within each party.
enum class SettingSwap { identity, swap_a, swap_b, swap_ab };

const char* classification_name(Classification c) noexcept;
const char* setting_swap_name(SettingSwap s) noexcept;

struct ChshReport {
  double bell_norm = 0.0;
  double landau_residual = 0.0;
  double commutator_a_norm = 0.0;
  double commutator_b_norm = 0.0;
  double permutation_max = 0.0;
  SettingSwap permutation_argmax = SettingSwap::identity;
  Classification classification = Classification::locally_compatible;
};

// Threshold below which a commutator norm counts as zero for classification.
inline constexpr double kCommutatorZeroTol = 1e-10;

/// (1/2)[A1(B1+B2) + A2(B1-B2)]. Hermitian whenever every A commutes with
/// every B; a combination that drifts off Hermitian symmetry past 1e-9 is
/// rejected.
HermitianOperator bell_operator(const BellScenario& s);

/// (1/2)[<A1B1> + <A1B2> + <A2B1> - <A2B2>] on psi. Agrees with
/// expectation(bell_operator(s), psi) to 1e-10.
double chsh_value(const BellScenario& s, const StateVector& psi);

/// Spectral norm of B^2 - (I - (1/4)[A1,A2][B1,B2]). Vanishes (< 1e-10)
/// for dichotomous scenarios in which the parties commute with each other.
double landau_residual(const BellScenario& s);

/// sup over unit states of |<B>| = operator norm of the Bell combination.
double max_chsh(const BellScenario& s);

/// Largest Bell-operator norm over the four setting swaps, with the swap
/// that achieves it (ties resolve to the earliest label).
std::pair<double, SettingSwap> permutation_max(const BellScenario& s);

/// All of the above in one report.
ChshReport analyze(const BellScenario& s);

// Named scenarios used by the CLI and the acceptance suite:
//   optimal                        Pauli settings at the maximizing angles
//   compatible                     B1 = B2 (one party's pair commutes)
//   doubly-incompatible-nonoptimal Pauli z/x on both parties
BellScenario preset_scenario(const std::string& name);
std::vector<std::string> preset_scenario_names();

/// (|01> - |10>)/sqrt(2) on a 2x2-factored space.
StateVector singlet_state();

/// Joint probabilities {p++, p+-, p-+, p--} for a pair of commuting
/// dichotomous observables, from the spectral projectors onto their
/// positive/negative eigenspaces.
std::array<double, 4> joint_outcome_probabilities(const HermitianOperator& a,
                                                  const HermitianOperator& b,
                                                  const StateVector& psi);

// ---------------------------------------------------------------------------
// Local response models: a finite sample space with single-valued responses
// in {-1, 0, +1} per setting, 0 standing for a non-detection.

struct LhvModel {
  struct Response {
    std::int8_t a1, a2, b1, b2;
  };
  std::vector<double> weights;
  std::vector<Response> responses;

  std::size_t sample_space_size() const noexcept { return weights.size(); }
};

/// S = (1/2)|E11 + E12 + E21 - E22| with E_ij = sum_l w(l) xi_Ai(l) xi_Bj(l).
/// Bounded by 1 for every valid model. Throws invalid_weights on negative
/// weights, a weight sum off 1 by more than 1e-12, or responses outside
/// {-1, 0, +1}.
double lhv_chsh(const LhvModel& m);

/// Exact maximum of lhv_chsh over all 3^4 deterministic response strategies,
/// by exhaustive integer enumeration.
double lhv_deterministic_max();

// ---------------------------------------------------------------------------
// Random instances for property sweeps.

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
ComplexMatrix haar_unitary(Eigen::Index dim, RandomStream& rng);

/// V diag(+-1) V^dagger with Haar-random V; the sign pattern is random but
/// never all-equal (that would be +-identity).
HermitianOperator random_dichotomous(Eigen::Index dim, RandomStream& rng);

/// Random dichotomous scenario on a (2 x 2)-factored space. When
/// commuting_b is set, the two B factors share an eigenbasis (so [B1,B2]=0)
/// with independent sign patterns, which may be trivial.
BellScenario random_local_scenario(RandomStream& rng, bool commuting_b = false);

/// Random mixture model: flat-Dirichlet weights over sample_space_size
/// points, responses uniform on {-1, 0, +1}.
LhvModel random_lhv_model(std::size_t sample_space_size, RandomStream& rng);

}  // namespace g2lab

#endif
