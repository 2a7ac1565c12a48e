#ifndef G2LAB_STATS_HPP
#define G2LAB_STATS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "g2lab/detection.hpp"

namespace g2lab {

/// Exact click counts from a two-channel run, with the derived rates.
///
/// g2 estimates the zero-delay second-order coherence as p_c / (p1 p2) from
/// gated records; it is undefined (nullopt) when either channel never
/// clicked. Its standard error is first-order delta method with the exact
/// per-trial multinomial covariance of (click1, click2, coincidence):
///
///   Var(ln g2) * N = (1-pc)/pc - (1-p1)/p1 - (1-p2)/p2 + 2*(pc - p1 p2)/(p1 p2)
///   se_g2 = g2 * sqrt(max(0, Var(ln g2)))
///
/// using Cov(c1,c2) = pc - p1 p2 and Cov(ci, coinc) = pc (1 - pi).
struct DetectionStats {
  std::uint64_t trials = 0;
  std::uint64_t singles1 = 0;
  std::uint64_t singles2 = 0;
  std::uint64_t coincidences = 0;

  double p1() const noexcept;
  double p2() const noexcept;
  double pc() const noexcept;
  std::optional<double> g2() const noexcept;
  double se_g2() const noexcept;
};

/// Streaming accumulator; add() is order-insensitive and partial
/// accumulators merge exactly (integer counts).
class ClickAccumulator {
 public:
  void add(const ClickRecord& record);
  DetectionStats stats() const noexcept { return stats_; }

 private:
  DetectionStats stats_;
  int channel_count_ = -1;
};

DetectionStats accumulate(std::span<const ClickRecord> records);
DetectionStats merge(const DetectionStats& a, const DetectionStats& b);

/// Anticorrelation verdict: alpha = pc/(p1 p2) compared against the
/// classical floor of 1 at the given sigma level. alpha below the floor by
/// more than confidence_sigma standard errors certifies nonclassical
/// statistics. Throws undefined_ratio when p1*p2 = 0.
struct GrangierVerdict {
  double alpha = 0.0;
  double se_alpha = 0.0;
  double confidence_sigma = 0.0;
  bool classical_compatible = false;
};

GrangierVerdict grangier_test(const DetectionStats& st, double sigma);

/// Pair-outcome counts for one measurement setting.
struct SettingCounts {
  std::uint64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;

  std::uint64_t total() const noexcept { return n_pp + n_pm + n_mp + n_mm; }
};

struct ChshEstimate {
  double value = 0.0;
  double se = 0.0;
  std::array<double, 4> correlators{};  // E11, E12, E21, E22
};

/// S = (1/2)|E11 + E12 + E21 - E22| with E = (n++ - n+- - n-+ + n--)/n per
/// setting; se by binomial propagation, Var(E) = (1 - E^2)/n. Throws
/// empty_setting when a setting has no counted trials.
ChshEstimate chsh_from_counts(const std::array<SettingCounts, 4>& settings);

}  // namespace g2lab

#endif
