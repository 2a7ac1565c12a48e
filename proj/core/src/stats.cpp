#include "g2lab/stats.hpp"

#include <cmath>

namespace g2lab {

double DetectionStats::p1() const noexcept {
  return trials ? static_cast<double>(singles1) / trials : 0.0;
}

double DetectionStats::p2() const noexcept {
  return trials ? static_cast<double>(singles2) / trials : 0.0;
}

double DetectionStats::pc() const noexcept {
  return trials ? static_cast<double>(coincidences) / trials : 0.0;
}

std::optional<double> DetectionStats::g2() const noexcept {
  const double denom = p1() * p2();
  if (denom <= 0.0) return std::nullopt;
  return pc() / denom;
}

double DetectionStats::se_g2() const noexcept {
  const auto g = g2();
  if (!g || *g == 0.0 || trials == 0) return 0.0;
  const double q1 = p1(), q2 = p2(), qc = pc();
  const double var_log = ((1.0 - qc) / qc - (1.0 - q1) / q1 -
                          (1.0 - q2) / q2 + 2.0 * (qc - q1 * q2) / (q1 * q2)) /
                         static_cast<double>(trials);
  return *g * std::sqrt(std::max(0.0, var_log));
}

void ClickAccumulator::add(const ClickRecord& record) {
  if (channel_count_ < 0) {
    if (record.channel_count != 2)
      throw Error(ErrorKind::channel_count_mismatch,
                  "coincidence statistics are defined for 2-channel records");
    channel_count_ = record.channel_count;
  } else if (record.channel_count != channel_count_) {
    throw Error(ErrorKind::channel_count_mismatch,
                "records mix different channel counts");
  }
  ++stats_.trials;
  const bool c1 = record.clicked(0);
  const bool c2 = record.clicked(1);
  if (c1) ++stats_.singles1;
  if (c2) ++stats_.singles2;
  if (c1 && c2) ++stats_.coincidences;
}

DetectionStats accumulate(std::span<const ClickRecord> records) {
  if (records.empty())
    throw Error(ErrorKind::channel_count_mismatch,
                "cannot accumulate an empty record stream");
  ClickAccumulator acc;
  for (const auto& r : records) acc.add(r);
  return acc.stats();
}

DetectionStats merge(const DetectionStats& a, const DetectionStats& b) {
  DetectionStats out;
  out.trials = a.trials + b.trials;
  out.singles1 = a.singles1 + b.singles1;
  out.singles2 = a.singles2 + b.singles2;
  out.coincidences = a.coincidences + b.coincidences;
  return out;
}

GrangierVerdict grangier_test(const DetectionStats& st, double sigma) {
  const auto g = st.g2();
  if (!g)
    throw Error(ErrorKind::undefined_ratio,
                "alpha undefined: a channel registered no singles");
  GrangierVerdict v;
  v.alpha = *g;
  v.se_alpha = st.se_g2();
  v.confidence_sigma = sigma;
  v.classical_compatible = v.alpha >= 1.0 - sigma * v.se_alpha;
  return v;
}

ChshEstimate chsh_from_counts(const std::array<SettingCounts, 4>& settings) {
  ChshEstimate est;
  double var_sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& c = settings[k];
    const std::uint64_t n = c.total();
    if (n == 0)
      throw Error(ErrorKind::empty_setting,
                  "a measurement setting has no counted trials");
    const double e =
        (static_cast<double>(c.n_pp) - static_cast<double>(c.n_pm) -
         static_cast<double>(c.n_mp) + static_cast<double>(c.n_mm)) /
        static_cast<double>(n);
    est.correlators[k] = e;
    var_sum += (1.0 - e * e) / static_cast<double>(n);
  }
  est.value = 0.5 * std::abs(est.correlators[0] + est.correlators[1] +
                             est.correlators[2] - est.correlators[3]);
  est.se = 0.5 * std::sqrt(var_sum);
  return est;
}

}  // namespace g2lab
