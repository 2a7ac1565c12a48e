#ifndef G2LAB_HILBERT_HPP
#define G2LAB_HILBERT_HPP

#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "g2lab/errors.hpp"

namespace g2lab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances. Construction is strict; operation boundaries allow for the
// roundoff that products and sums of valid operators accumulate.
inline constexpr double kHermitianConstructionTol = 1e-12;
inline constexpr double kHermitianOperationTol = 1e-9;
inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kZeroNormFloor = 1e-15;
inline constexpr double kDichotomousTol = 1e-9;

/// Unit vector in a finite-dimensional complex Hilbert space. Construction
/// normalizes, so the invariant sum |c_j|^2 = 1 always holds afterwards.
class StateVector {
 public:
  explicit StateVector(ComplexVector raw);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  Complex amplitude(Eigen::Index j) const { return amplitudes_(j); }

 private:
  ComplexVector amplitudes_;
};

/// Complex square matrix with Hermitian symmetry, checked at construction.
/// The tolerance parameter exists for matrices assembled from prior
/// operations; entries are stored exactly as given.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix entries,
                             double tol = kHermitianConstructionTol);

  const ComplexMatrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }

  static HermitianOperator identity(Eigen::Index dim);

 private:
  ComplexMatrix entries_;
};

// Spin-1/2 basics used by the preset scenarios and the tests.
HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();

/// c = C / ||C||. Throws zero_vector when ||C|| <= 1e-15.
StateVector normalize(const ComplexVector& raw);

/// Kronecker product; Hermiticity is preserved exactly.
HermitianOperator tensor(const HermitianOperator& x,
                         const HermitianOperator& y);

/// XY - YX as a plain matrix (anti-Hermitian for Hermitian inputs).
ComplexMatrix commutator(const HermitianOperator& x,
                         const HermitianOperator& y);

/// Largest singular value of an arbitrary complex matrix.
double spectral_norm(const ComplexMatrix& m);

/// max |eigenvalue| via Hermitian eigendecomposition. Rechecks symmetry at
/// the operation tolerance and throws non_hermitian past it.
double operator_norm(const HermitianOperator& x);

/// <psi|X|psi>. The imaginary residue must stay below 1e-10; it is then
/// discarded.
double expectation(const HermitianOperator& x, const StateVector& psi);

/// Two-party measurement scenario: settings A1/A2 for the first party and
/// B1/B2 for the second, all acting on the same space. local_dims records a
/// tensor factorization dim = dimA * dimB under which the A's act on the
/// first factor only and the B's on the second.
struct BellScenario {
  HermitianOperator a1, a2, b1, b2;
  std::optional<std::pair<Eigen::Index, Eigen::Index>> local_dims;
  bool dichotomous = false;

  BellScenario(HermitianOperator a1_in, HermitianOperator a2_in,
               HermitianOperator b1_in, HermitianOperator b2_in,
               std::optional<std::pair<Eigen::Index, Eigen::Index>> dims = {},
               bool dichotomous_in = false);

  Eigen::Index dim() const noexcept { return a1.dim(); }

  /// Builds A_i = a_i (x) I and B_i = I (x) b_i from single-party factors.
  static BellScenario from_local_factors(const HermitianOperator& a1f,
                                         const HermitianOperator& a2f,
                                         const HermitianOperator& b1f,
                                         const HermitianOperator& b2f,
                                         bool dichotomous = false);
};

/// True iff every A_i commutes with every B_j (within 1e-10) and the
/// partial-trace factorization reproduces each operator as a_i (x) I or
/// I (x) b_i within 1e-9. Throws missing_structure when local_dims is unset.
bool verify_local_structure(const BellScenario& s);

/// Eigenvalues all within 1e-9 of -1 or +1.
bool is_dichotomous(const HermitianOperator& x, double tol = kDichotomousTol);

}  // namespace g2lab

#endif
