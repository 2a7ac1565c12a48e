#ifndef G2LAB_FIELDS_HPP
#define G2LAB_FIELDS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "g2lab/hilbert.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

/// A classical field written over n orthogonal modes with complex
/// amplitudes; mode_labels carry the physical tags (e.g. frequencies).
struct ModeSuperposition {
  ComplexVector amplitudes;
  std::vector<double> mode_labels;

  explicit ModeSuperposition(ComplexVector amps,
                             std::vector<double> labels = {});
};

/// |C_j|^2 for one mode. Throws index_out_of_range.
double intensity(const ModeSuperposition& m, Eigen::Index j);

/// p_j = I_j / sum_k I_k. Throws zero_field when the total vanishes.
RealVector classical_born(const ModeSuperposition& m);

/// Normalized state on a (dim_a x dim_b)-structured space built from a mode
/// amplitude matrix; entry (j,k) weights basis vector j*dim_b + k.
StateVector intra_entangled_state(Eigen::Index dim_a, Eigen::Index dim_b,
                                  const ComplexMatrix& amplitudes);

/// Rank of the amplitude matrix of a tensor-structured state: singular
/// values above tol count. Rank 1 means separable.
int schmidt_rank(const StateVector& psi, Eigen::Index dim_a,
                 Eigen::Index dim_b, double tol = 1e-10);

/// Two-channel intensities for one trial.
struct IntensitySample {
  std::uint64_t trial_index = 0;
  std::array<double, 2> intensities{0.0, 0.0};

  double total() const noexcept { return intensities[0] + intensities[1]; }
};

/// Stochastic two-channel intensity source. Sampling is a pure function of
/// (model, master seed, trial index): counter-derived streams, no state.
///
///   Deterministic    constant declared intensities
///   Thermal          exponentially distributed intensity; common_mode draws
///                    one value per trial and scales both channels with it
///                    (one chaotic beam split in two), otherwise the channels
///                    draw independently
///   AntiCorrelated   one channel gets nearly the whole energy budget
///                    (with small Gaussian jitter, clamped at zero), the
///                    other gets the residual epsilon share; which is which
///                    is a fair coin per trial
///   Custom           empirical per-trial table, cycled past its length
class ClassicalFieldModel {
 public:
  enum class Kind { deterministic, thermal, anti_correlated, custom };

  static ClassicalFieldModel deterministic(double i1, double i2);
  static ClassicalFieldModel thermal(double mean1, double mean2,
                                     bool common_mode = true);
  static ClassicalFieldModel anti_correlated(double total, double epsilon,
                                             double jitter_frac = 0.05);
  static ClassicalFieldModel custom(std::vector<std::array<double, 2>> table);

  /// Parses CSV with header `trial,i1,i2`. Negative intensities and
  /// malformed rows are rejected with the offending line number.
  static ClassicalFieldModel custom_from_csv(const std::string& text);

  IntensitySample sample(std::uint64_t trial_index, RandomStream& rng) const;

  /// Counter-based convenience: derives the trial's stream itself.
  IntensitySample sample_at(std::uint64_t master_seed,
                            std::uint64_t trial_index) const;

  Kind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept;
  int channel_count() const noexcept { return 2; }
  std::array<double, 2> mean_intensities() const;

  // AntiCorrelated parameters (zero for other kinds).
  double total_budget() const noexcept { return total_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  ClassicalFieldModel() = default;

  Kind kind_ = Kind::deterministic;
  std::array<double, 2> means_{0.0, 0.0};
  bool common_mode_ = false;
  double total_ = 0.0;
  double epsilon_ = 0.0;
  double jitter_sigma_ = 0.0;
  std::vector<std::array<double, 2>> table_;
};

}  // namespace g2lab

#endif
