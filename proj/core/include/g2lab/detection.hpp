#ifndef G2LAB_DETECTION_HPP
#define G2LAB_DETECTION_HPP

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "g2lab/fields.hpp"
#include "g2lab/hilbert.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

/// Binary detector outcomes for one trial, up to 32 channels. Any click
/// pattern is recordable; coincidences are data, not errors.
struct ClickRecord {
  std::uint64_t trial_index = 0;
  std::uint32_t mask = 0;
  std::uint8_t channel_count = 0;

  bool clicked(unsigned channel) const noexcept {
    return (mask >> channel) & 1u;
  }
  void set(unsigned channel) noexcept { mask |= (1u << channel); }
  int click_count() const noexcept;
};

enum class DetectorModel { quantum_born, semiclassical_poisson, threshold };

/// Detector parameters. efficiency and gate_time apply to the Poisson
/// model, threshold to the threshold model. dark_count_rate adds a
/// field-independent rate to each Poisson channel; it defaults to 0.
struct DetectorConfig {
  DetectorModel model = DetectorModel::quantum_born;
  double efficiency = 1.0;
  double gate_time = 0.1;
  double threshold = 0.5;
  double dark_count_rate = 0.0;

  void validate() const;
  const char* model_name() const noexcept;
};

/// One trial of ideal single-excitation detection: exactly one channel
/// clicks, channel j with Born probability |c_j|^2. A single quantum is
/// registered once, so cross-channel coincidences cannot occur.
ClickRecord quantum_detect(const StateVector& psi, std::uint64_t trial_index,
                           RandomStream& rng);

/// One trial of semiclassical photoelectron conversion: channel j clicks
/// independently with probability 1 - exp(-(eta * I_j + dark) * gate_time).
ClickRecord semiclassical_detect(const IntensitySample& s,
                                 const DetectorConfig& cfg, RandomStream& rng);

/// Channel j clicks iff I_j > threshold. Deterministic given the sample.
ClickRecord threshold_detect(const IntensitySample& s,
                             const DetectorConfig& cfg);

/// Balanced-splitter outputs: both channels receive shares of the sample's
/// combined intensity. This is the geometry of the coincidence test, where
/// one beam feeds both detectors; transmittance is channel 0's share.
IntensitySample beamsplit(const IntensitySample& s,
                          double transmittance = 0.5);

using ExperimentSource = std::variant<StateVector, ClassicalFieldModel>;

/// Runs N trials of a source/detector pairing and feeds each record to
/// sink, never materializing the full list. Trial i's randomness comes from
/// a counter-derived stream of (seed, i), so results are independent of
/// evaluation order and identical across reruns with the same seed.
///
/// Pairings: quantum_born needs a StateVector; semiclassical_poisson and
/// threshold need a ClassicalFieldModel. semiclassical_poisson detects the
/// split beam (see beamsplit); threshold detects the model's channels
/// directly. Anything else throws incompatible_source_detector.
void run_experiment(const ExperimentSource& source, const DetectorConfig& cfg,
                    std::uint64_t trials, std::uint64_t seed,
                    const std::function<void(const ClickRecord&)>& sink);

/// Materializing convenience for small N.
std::vector<ClickRecord> run_experiment(const ExperimentSource& source,
                                        const DetectorConfig& cfg,
                                        std::uint64_t trials,
                                        std::uint64_t seed);

}  // namespace g2lab

#endif
