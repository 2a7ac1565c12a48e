#include "g2lab/bell.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace g2lab {

namespace {

ComplexMatrix bell_combination(const ComplexMatrix& a1, const ComplexMatrix& a2,
                               const ComplexMatrix& b1,
                               const ComplexMatrix& b2) {
  return 0.5 * (a1 * (b1 + b2) + a2 * (b1 - b2));
}

HermitianOperator as_bell_operator(const ComplexMatrix& m) {
  // Cross-party commutation makes the combination Hermitian; anything past
  // the operation tolerance means the scenario was not locally structured.
  return HermitianOperator(m, kHermitianOperationTol);
}

double correlator(const HermitianOperator& a, const HermitianOperator& b,
                  const StateVector& psi) {
  const Complex value =
      psi.amplitudes().dot(a.matrix() * (b.matrix() * psi.amplitudes()));
  if (std::abs(value.imag()) >= 1e-10) {
    std::ostringstream os;
    os << "correlator has imaginary residue " << value.imag()
       << "; settings do not commute across parties";
    throw Error(ErrorKind::non_hermitian, os.str());
  }
  return value.real();
}

void check_dims(const BellScenario& s, const StateVector& psi) {
  if (s.dim() != psi.dim())
    throw Error(ErrorKind::dim_mismatch,
                "scenario and state dimensions differ");
}

}  // namespace

const char* classification_name(Classification c) noexcept {
  switch (c) {
    case Classification::locally_compatible: return "LocallyCompatible";
    case Classification::doubly_incompatible: return "DoublyIncompatible";
  }
  return "unknown";
}

const char* setting_swap_name(SettingSwap s) noexcept {
  switch (s) {
    case SettingSwap::identity: return "identity";
    case SettingSwap::swap_a: return "swap-a";
    case SettingSwap::swap_b: return "swap-b";
    case SettingSwap::swap_ab: return "swap-ab";
  }
  return "unknown";
}

HermitianOperator bell_operator(const BellScenario& s) {
  return as_bell_operator(bell_combination(s.a1.matrix(), s.a2.matrix(),
                                           s.b1.matrix(), s.b2.matrix()));
}

double chsh_value(const BellScenario& s, const StateVector& psi) {
  check_dims(s, psi);
  return 0.5 * (correlator(s.a1, s.b1, psi) + correlator(s.a1, s.b2, psi) +
                correlator(s.a2, s.b1, psi) - correlator(s.a2, s.b2, psi));
}

double landau_residual(const BellScenario& s) {
  const ComplexMatrix b = bell_operator(s).matrix();
  const ComplexMatrix identity =
      ComplexMatrix::Identity(s.dim(), s.dim());
  const ComplexMatrix rhs =
      identity - 0.25 * commutator(s.a1, s.a2) * commutator(s.b1, s.b2);
  return spectral_norm(b * b - rhs);
}

double max_chsh(const BellScenario& s) {
  return operator_norm(bell_operator(s));
}

std::pair<double, SettingSwap> permutation_max(const BellScenario& s) {
  const ComplexMatrix& a1 = s.a1.matrix();
  const ComplexMatrix& a2 = s.a2.matrix();
  const ComplexMatrix& b1 = s.b1.matrix();
  const ComplexMatrix& b2 = s.b2.matrix();

  const std::array<std::pair<SettingSwap, ComplexMatrix>, 4> variants = {{
      {SettingSwap::identity, bell_combination(a1, a2, b1, b2)},
      {SettingSwap::swap_a, bell_combination(a2, a1, b1, b2)},
      {SettingSwap::swap_b, bell_combination(a1, a2, b2, b1)},
      {SettingSwap::swap_ab, bell_combination(a2, a1, b2, b1)},
  }};

  double best = -1.0;
  SettingSwap best_swap = SettingSwap::identity;
  for (const auto& [label, m] : variants) {
    const double norm = operator_norm(as_bell_operator(m));
    if (norm > best + 1e-12) {
      best = norm;
      best_swap = label;
    }
  }
  return {best, best_swap};
}

ChshReport analyze(const BellScenario& s) {
  ChshReport report;
  report.bell_norm = max_chsh(s);
  report.landau_residual = landau_residual(s);
  report.commutator_a_norm = spectral_norm(commutator(s.a1, s.a2));
  report.commutator_b_norm = spectral_norm(commutator(s.b1, s.b2));
  const auto [pmax, argmax] = permutation_max(s);
  report.permutation_max = pmax;
  report.permutation_argmax = argmax;
  report.classification =
      std::min(report.commutator_a_norm, report.commutator_b_norm) <
              kCommutatorZeroTol
          ? Classification::locally_compatible
          : Classification::doubly_incompatible;
  return report;
}

BellScenario preset_scenario(const std::string& name) {
  const auto sx = pauli_x();
  const auto sz = pauli_z();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  if (name == "optimal") {
    const HermitianOperator diag(
        inv_sqrt2 * (sz.matrix() + sx.matrix()));
    const HermitianOperator anti(
        inv_sqrt2 * (sz.matrix() - sx.matrix()));
    return BellScenario::from_local_factors(sz, sx, diag, anti, true);
  }
  if (name == "compatible") {
    return BellScenario::from_local_factors(sz, sx, sz, sz, true);
  }
  if (name == "doubly-incompatible-nonoptimal") {
    return BellScenario::from_local_factors(sz, sx, sz, sx, true);
  }
  throw Error(ErrorKind::invalid_config, "unknown scenario preset: " + name);
}

std::vector<std::string> preset_scenario_names() {
  return {"optimal", "compatible", "doubly-incompatible-nonoptimal"};
}

StateVector singlet_state() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = 1.0;
  v(2) = -1.0;
  return normalize(v);
}

std::array<double, 4> joint_outcome_probabilities(const HermitianOperator& a,
                                                  const HermitianOperator& b,
                                                  const StateVector& psi) {
  if (a.dim() != b.dim() || a.dim() != psi.dim())
    throw Error(ErrorKind::dim_mismatch,
                "joint probabilities need matching dimensions");
  const ComplexMatrix c =
      a.matrix() * b.matrix() - b.matrix() * a.matrix();
  if (c.cwiseAbs().maxCoeff() > 1e-9)
    throw Error(ErrorKind::non_hermitian,
                "joint outcomes require commuting observables");

  auto positive_projector = [](const HermitianOperator& op) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(op.matrix());
    ComplexMatrix proj = ComplexMatrix::Zero(op.dim(), op.dim());
    for (Eigen::Index i = 0; i < op.dim(); ++i) {
      if (solver.eigenvalues()(i) > 0.0)
        proj += solver.eigenvectors().col(i) *
                solver.eigenvectors().col(i).adjoint();
    }
    return proj;
  };

  const ComplexMatrix pa = positive_projector(a);
  const ComplexMatrix pb = positive_projector(b);
  const ComplexMatrix id = ComplexMatrix::Identity(a.dim(), a.dim());

  auto prob = [&](const ComplexMatrix& pa_s, const ComplexMatrix& pb_s) {
    const ComplexVector v = pa_s * (pb_s * psi.amplitudes());
    return v.squaredNorm();
  };

  std::array<double, 4> p = {prob(pa, pb), prob(pa, id - pb),
                             prob(id - pa, pb), prob(id - pa, id - pb)};
  const double total = p[0] + p[1] + p[2] + p[3];
  for (double& x : p) x /= total;
  return p;
}

double lhv_chsh(const LhvModel& m) {
  if (m.weights.size() != m.responses.size() || m.weights.empty())
    throw Error(ErrorKind::invalid_weights,
                "weights and response table sizes differ or are empty");
  double sum = 0.0;
  for (double w : m.weights) {
    if (w < 0.0)
      throw Error(ErrorKind::invalid_weights, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(ErrorKind::invalid_weights, "weights do not sum to 1");

  double e11 = 0.0, e12 = 0.0, e21 = 0.0, e22 = 0.0;
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    const auto& r = m.responses[i];
    for (std::int8_t v : {r.a1, r.a2, r.b1, r.b2}) {
      if (v < -1 || v > 1)
        throw Error(ErrorKind::invalid_weights,
                    "response values must lie in {-1, 0, +1}");
    }
    const double w = m.weights[i];
    e11 += w * r.a1 * r.b1;
    e12 += w * r.a1 * r.b2;
    e21 += w * r.a2 * r.b1;
    e22 += w * r.a2 * r.b2;
  }
  return 0.5 * std::abs(e11 + e12 + e21 - e22);
}

double lhv_deterministic_max() {
  int best_twice = 0;
  for (int a1 = -1; a1 <= 1; ++a1)
    for (int a2 = -1; a2 <= 1; ++a2)
      for (int b1 = -1; b1 <= 1; ++b1)
        for (int b2 = -1; b2 <= 1; ++b2) {
          const int twice = std::abs(a1 * (b1 + b2) + a2 * (b1 - b2));
          if (twice > best_twice) best_twice = twice;
        }
  return 0.5 * best_twice;
}

ComplexMatrix haar_unitary(Eigen::Index dim, RandomStream& rng) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      g(i, j) = Complex(rng.normal(0.0, 1.0), rng.normal(0.0, 1.0));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar, not QR-dependent.
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

HermitianOperator random_dichotomous(Eigen::Index dim, RandomStream& rng) {
  RealVector signs(dim);
  bool all_equal = true;
  do {
    for (Eigen::Index i = 0; i < dim; ++i)
      signs(i) = rng.bernoulli(0.5) ? 1.0 : -1.0;
    all_equal = (signs.minCoeff() == signs.maxCoeff());
  } while (dim > 1 && all_equal);
  const ComplexMatrix v = haar_unitary(dim, rng);
  ComplexMatrix m = v * signs.asDiagonal() * v.adjoint();
  // Products leave ~1e-16 asymmetry; store the exactly Hermitian part.
  m = 0.5 * (m + ComplexMatrix(m.adjoint()));
  return HermitianOperator(m);
}

BellScenario random_local_scenario(RandomStream& rng, bool commuting_b) {
  const auto a1 = random_dichotomous(2, rng);
  const auto a2 = random_dichotomous(2, rng);
  if (!commuting_b) {
    const auto b1 = random_dichotomous(2, rng);
    const auto b2 = random_dichotomous(2, rng);
    return BellScenario::from_local_factors(a1, a2, b1, b2, true);
  }
  const ComplexMatrix v = haar_unitary(2, rng);
  auto signed_op = [&](double s0, double s1) {
    RealVector signs(2);
    signs << s0, s1;
    ComplexMatrix m = v * signs.asDiagonal() * v.adjoint();
    m = 0.5 * (m + ComplexMatrix(m.adjoint()));
    return HermitianOperator(m);
  };
  auto pick = [&] { return rng.bernoulli(0.5) ? 1.0 : -1.0; };
  const auto b1 = signed_op(pick(), pick());
  const auto b2 = signed_op(pick(), pick());
  return BellScenario::from_local_factors(a1, a2, b1, b2, true);
}

LhvModel random_lhv_model(std::size_t sample_space_size, RandomStream& rng) {
  LhvModel m;
  m.weights.resize(sample_space_size);
  m.responses.resize(sample_space_size);
  double total = 0.0;
  for (double& w : m.weights) {
    w = rng.exponential(1.0);  // flat Dirichlet after normalization
    total += w;
  }
  for (double& w : m.weights) w /= total;
  // Renormalize exactly enough for the 1e-12 weight-sum contract.
  const double sum =
      std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
  for (double& w : m.weights) w /= sum;
  auto pick = [&] {
    return static_cast<std::int8_t>(static_cast<int>(rng.uniform_below(3)) -
                                    1);
  };
  for (auto& r : m.responses) r = {pick(), pick(), pick(), pick()};
  return m;
}

}  // namespace g2lab
