#include "g2lab/detection.hpp"

#include <bit>
#include <cmath>

namespace g2lab {

int ClickRecord::click_count() const noexcept { return std::popcount(mask); }

void DetectorConfig::validate() const {
  switch (model) {
    case DetectorModel::quantum_born:
      break;
    case DetectorModel::semiclassical_poisson:
      if (!(efficiency > 0.0) || efficiency > 1.0)
        throw Error(ErrorKind::invalid_config,
                    "efficiency must lie in (0, 1]");
      if (!(gate_time > 0.0))
        throw Error(ErrorKind::invalid_config, "gate_time must be > 0");
      if (dark_count_rate < 0.0)
        throw Error(ErrorKind::invalid_config,
                    "dark_count_rate must be >= 0");
      break;
    case DetectorModel::threshold:
      if (threshold < 0.0)
        throw Error(ErrorKind::invalid_config, "threshold must be >= 0");
      break;
  }
}

const char* DetectorConfig::model_name() const noexcept {
  switch (model) {
    case DetectorModel::quantum_born: return "quantum-born";
    case DetectorModel::semiclassical_poisson: return "semiclassical";
    case DetectorModel::threshold: return "threshold";
  }
  return "unknown";
}

ClickRecord quantum_detect(const StateVector& psi, std::uint64_t trial_index,
                           RandomStream& rng) {
  const Eigen::Index n = psi.dim();
  if (n > 32)
    throw Error(ErrorKind::channel_count_mismatch,
                "click records support at most 32 channels");
  ClickRecord record;
  record.trial_index = trial_index;
  record.channel_count = static_cast<std::uint8_t>(n);

  // Walk the cumulative Born weights; the state is normalized so the last
  // channel absorbs any roundoff remainder.
  const double u = rng.uniform();
  double cumulative = 0.0;
  Eigen::Index chosen = n - 1;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += std::norm(psi.amplitude(j));
    if (u < cumulative) {
      chosen = j;
      break;
    }
  }
  record.set(static_cast<unsigned>(chosen));
  return record;
}

ClickRecord semiclassical_detect(const IntensitySample& s,
                                 const DetectorConfig& cfg,
                                 RandomStream& rng) {
  ClickRecord record;
  record.trial_index = s.trial_index;
  record.channel_count = 2;
  for (unsigned j = 0; j < 2; ++j) {
    const double rate =
        cfg.efficiency * s.intensities[j] + cfg.dark_count_rate;
    const double p = -std::expm1(-rate * cfg.gate_time);
    if (rng.bernoulli(p)) record.set(j);
  }
  return record;
}

ClickRecord threshold_detect(const IntensitySample& s,
                             const DetectorConfig& cfg) {
  ClickRecord record;
  record.trial_index = s.trial_index;
  record.channel_count = 2;
  for (unsigned j = 0; j < 2; ++j)
    if (s.intensities[j] > cfg.threshold) record.set(j);
  return record;
}

IntensitySample beamsplit(const IntensitySample& s, double transmittance) {
  if (transmittance < 0.0 || transmittance > 1.0)
    throw Error(ErrorKind::invalid_config,
                "transmittance must lie in [0, 1]");
  IntensitySample out;
  out.trial_index = s.trial_index;
  const double total = s.total();
  out.intensities = {transmittance * total, (1.0 - transmittance) * total};
  return out;
}

void run_experiment(const ExperimentSource& source, const DetectorConfig& cfg,
                    std::uint64_t trials, std::uint64_t seed,
                    const std::function<void(const ClickRecord&)>& sink) {
  if (trials < 1)
    throw Error(ErrorKind::invalid_config, "trials must be >= 1");
  cfg.validate();

  const bool quantum_source = std::holds_alternative<StateVector>(source);
  if (cfg.model == DetectorModel::quantum_born) {
    if (!quantum_source)
      throw Error(ErrorKind::incompatible_source_detector,
                  "quantum-born detection needs a state-vector source");
    const auto& psi = std::get<StateVector>(source);
    for (std::uint64_t i = 0; i < trials; ++i) {
      RandomStream rng(seed, streams::detection, i);
      sink(quantum_detect(psi, i, rng));
    }
    return;
  }

  if (quantum_source)
    throw Error(ErrorKind::incompatible_source_detector,
                "intensity detection needs a classical field model source");
  const auto& model = std::get<ClassicalFieldModel>(source);
  for (std::uint64_t i = 0; i < trials; ++i) {
    RandomStream rng(seed, streams::detection, i);
    const IntensitySample raw = model.sample(i, rng);
    if (cfg.model == DetectorModel::semiclassical_poisson) {
      sink(semiclassical_detect(beamsplit(raw), cfg, rng));
    } else {
      sink(threshold_detect(raw, cfg));
    }
  }
}

std::vector<ClickRecord> run_experiment(const ExperimentSource& source,
                                        const DetectorConfig& cfg,
                                        std::uint64_t trials,
                                        std::uint64_t seed) {
  std::vector<ClickRecord> records;
  records.reserve(trials);
  run_experiment(source, cfg, trials, seed,
                 [&](const ClickRecord& r) { records.push_back(r); });
  return records;
}

}  // namespace g2lab
