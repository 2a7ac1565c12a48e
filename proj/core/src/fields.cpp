#include "g2lab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace g2lab {

ModeSuperposition::ModeSuperposition(ComplexVector amps,
                                     std::vector<double> labels)
    : amplitudes(std::move(amps)), mode_labels(std::move(labels)) {
  if (amplitudes.size() < 1 || amplitudes.norm() == 0.0)
    throw Error(ErrorKind::zero_field,
                "mode superposition needs at least one nonzero amplitude");
  if (!mode_labels.empty() &&
      mode_labels.size() != static_cast<std::size_t>(amplitudes.size()))
    throw Error(ErrorKind::dim_mismatch,
                "mode labels and amplitudes differ in length");
}

double intensity(const ModeSuperposition& m, Eigen::Index j) {
  if (j < 0 || j >= m.amplitudes.size())
    throw Error(ErrorKind::index_out_of_range, "mode index out of range");
  return std::norm(m.amplitudes(j));
}

RealVector classical_born(const ModeSuperposition& m) {
  RealVector intensities = m.amplitudes.cwiseAbs2();
  const double total = intensities.sum();
  if (total <= 0.0)
    throw Error(ErrorKind::zero_field, "total intensity is zero");
  return intensities / total;
}

StateVector intra_entangled_state(Eigen::Index dim_a, Eigen::Index dim_b,
                                  const ComplexMatrix& amplitudes) {
  if (amplitudes.rows() != dim_a || amplitudes.cols() != dim_b)
    throw Error(ErrorKind::dim_mismatch,
                "amplitude matrix shape must be dim_a x dim_b");
  ComplexVector flat(dim_a * dim_b);
  for (Eigen::Index j = 0; j < dim_a; ++j)
    for (Eigen::Index k = 0; k < dim_b; ++k)
      flat(j * dim_b + k) = amplitudes(j, k);
  if (flat.norm() <= kZeroNormFloor)
    throw Error(ErrorKind::zero_field, "all mode amplitudes vanish");
  return normalize(flat);
}

int schmidt_rank(const StateVector& psi, Eigen::Index dim_a,
                 Eigen::Index dim_b, double tol) {
  if (psi.dim() != dim_a * dim_b)
    throw Error(ErrorKind::dim_mismatch,
                "state dimension does not factor as dim_a * dim_b");
  ComplexMatrix m(dim_a, dim_b);
  for (Eigen::Index j = 0; j < dim_a; ++j)
    for (Eigen::Index k = 0; k < dim_b; ++k)
      m(j, k) = psi.amplitude(j * dim_b + k);
  const auto sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank;
}

ClassicalFieldModel ClassicalFieldModel::deterministic(double i1, double i2) {
  if (i1 < 0.0 || i2 < 0.0)
    throw Error(ErrorKind::invalid_config, "intensities must be >= 0");
  ClassicalFieldModel m;
  m.kind_ = Kind::deterministic;
  m.means_ = {i1, i2};
  return m;
}

ClassicalFieldModel ClassicalFieldModel::thermal(double mean1, double mean2,
                                                 bool common_mode) {
  if (mean1 < 0.0 || mean2 < 0.0)
    throw Error(ErrorKind::invalid_config, "thermal means must be >= 0");
  ClassicalFieldModel m;
  m.kind_ = Kind::thermal;
  m.means_ = {mean1, mean2};
  m.common_mode_ = common_mode;
  return m;
}

ClassicalFieldModel ClassicalFieldModel::anti_correlated(double total,
                                                         double epsilon,
                                                         double jitter_frac) {
  if (total <= 0.0 || epsilon < 0.0 || epsilon >= 0.5 || jitter_frac < 0.0)
    throw Error(ErrorKind::invalid_config,
                "anti-correlated model needs total > 0, 0 <= eps < 0.5, "
                "jitter >= 0");
  ClassicalFieldModel m;
  m.kind_ = Kind::anti_correlated;
  m.total_ = total;
  m.epsilon_ = epsilon;
  m.jitter_sigma_ = jitter_frac * total;
  m.means_ = {0.5 * total, 0.5 * total};
  return m;
}

ClassicalFieldModel ClassicalFieldModel::custom(
    std::vector<std::array<double, 2>> table) {
  if (table.empty())
    throw Error(ErrorKind::invalid_config, "custom table is empty");
  double s1 = 0.0, s2 = 0.0;
  for (const auto& row : table) {
    if (row[0] < 0.0 || row[1] < 0.0)
      throw Error(ErrorKind::invalid_config,
                  "custom table intensities must be >= 0");
    s1 += row[0];
    s2 += row[1];
  }
  ClassicalFieldModel m;
  m.kind_ = Kind::custom;
  m.table_ = std::move(table);
  m.means_ = {s1 / m.table_.size(), s2 / m.table_.size()};
  return m;
}

ClassicalFieldModel ClassicalFieldModel::custom_from_csv(
    const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::array<double, 2>> table;

  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << "custom intensity CSV, line " << line_no << ": " << why;
    throw Error(ErrorKind::invalid_config, os.str());
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "trial,i1,i2") fail("expected header `trial,i1,i2`");
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::array<double, 3> values{};
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ',')) fail("expected 3 comma-separated fields");
      try {
        values[c] = std::stod(cell);
      } catch (const std::exception&) {
        fail("not a number: `" + cell + "`");
      }
    }
    if (values[1] < 0.0 || values[2] < 0.0) fail("negative intensity");
    table.push_back({values[1], values[2]});
  }
  if (table.empty()) {
    line_no = std::max(line_no, 1);
    fail("no data rows");
  }
  return custom(std::move(table));
}

IntensitySample ClassicalFieldModel::sample(std::uint64_t trial_index,
                                            RandomStream& rng) const {
  IntensitySample s;
  s.trial_index = trial_index;
  switch (kind_) {
    case Kind::deterministic:
      s.intensities = means_;
      break;
    case Kind::thermal:
      if (common_mode_) {
        const double e = rng.exponential(1.0);
        s.intensities = {means_[0] * e, means_[1] * e};
      } else {
        s.intensities = {means_[0] > 0 ? rng.exponential(means_[0]) : 0.0,
                         means_[1] > 0 ? rng.exponential(means_[1]) : 0.0};
      }
      break;
    case Kind::anti_correlated: {
      const std::size_t hot = rng.bernoulli(0.5) ? 0 : 1;
      const double budget = std::max(
          0.0, total_ * (1.0 - epsilon_) + rng.normal(0.0, jitter_sigma_));
      s.intensities[hot] = budget;
      s.intensities[1 - hot] = total_ * epsilon_;
      break;
    }
    case Kind::custom:
      s.intensities = table_[trial_index % table_.size()];
      break;
  }
  return s;
}

IntensitySample ClassicalFieldModel::sample_at(
    std::uint64_t master_seed, std::uint64_t trial_index) const {
  RandomStream rng(master_seed, streams::field_sampling, trial_index);
  return sample(trial_index, rng);
}

const char* ClassicalFieldModel::kind_name() const noexcept {
  switch (kind_) {
    case Kind::deterministic: return "deterministic";
    case Kind::thermal: return "thermal";
    case Kind::anti_correlated: return "anticorrelated";
    case Kind::custom: return "custom";
  }
  return "unknown";
}

std::array<double, 2> ClassicalFieldModel::mean_intensities() const {
  return means_;
}

}  // namespace g2lab
