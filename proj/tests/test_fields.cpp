#include <doctest.h>

#include <cmath>

#include "g2lab/fields.hpp"

using namespace g2lab;

namespace {

ModeSuperposition two_modes(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return ModeSuperposition(v);
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("mode intensity is the squared amplitude") {
  CHECK(intensity(two_modes(1, 0), 0) == 1.0);
  CHECK(intensity(two_modes(Complex(0, 3), 4), 1) == 16.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(intensity(two_modes(r, r), 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(intensity(two_modes(r, r), 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(intensity(two_modes(1, 0), 2), Error);
}

TEST_CASE("classical Born rule normalizes intensities") {
  const auto p = classical_born(two_modes(1, std::sqrt(3.0)));
  CHECK(p(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));

  const auto even = classical_born(two_modes(1, 1));
  CHECK(even(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("classical Born rule matches normalized state weights") {
  ComplexVector c(3);
  c << Complex(2, 1), Complex(0, -3), 0.5;
  const auto p = classical_born(ModeSuperposition(c));
  const auto psi = normalize(c);
  for (int j = 0; j < 3; ++j)
    CHECK(p(j) ==
          doctest::Approx(std::norm(psi.amplitude(j))).epsilon(1e-12));
}

TEST_CASE("classical Born rule ignores global rescaling") {
  ComplexVector c(2);
  c << Complex(0.3, -0.4), Complex(1.2, 0.1);
  const auto base = classical_born(ModeSuperposition(c));
  for (Complex lambda : {Complex(2, 0), Complex(0, 5), Complex(-0.3, 0.7)}) {
    const auto scaled = classical_born(ModeSuperposition(lambda * c));
    CHECK((base - scaled).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("zero field is rejected") {
  ComplexVector z = ComplexVector::Zero(2);
  CHECK_THROWS_AS(ModeSuperposition{z}, Error);
}

TEST_CASE("deterministic sampler is constant") {
  const auto m = ClassicalFieldModel::deterministic(2.0, 2.0);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto s = m.sample_at(123, i);
    CHECK(s.intensities[0] == 2.0);
    CHECK(s.intensities[1] == 2.0);
  }
}

TEST_CASE("thermal sampler mean converges at 3 standard errors") {
  // Exponential(mean 1): se of the sample mean at N = 1e6 is 1e-3.
  const auto m = ClassicalFieldModel::thermal(1.0, 1.0);
  const std::uint64_t n = 1'000'000;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i)
    sum += m.sample_at(2024, i).intensities[0];
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.003));
}

TEST_CASE("thermal sampler second moment ratio approaches 2") {
  // <I^2>/<I>^2 = 2 for exponential light; delta-method se of the ratio at
  // N = 1e6 is ~2e-3, so 3 se is ~6e-3. Assert with the in-sample se.
  const auto m = ClassicalFieldModel::thermal(1.0, 1.0);
  const std::uint64_t n = 1'000'000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = m.sample_at(7, i).intensities[0];
    const double x2 = x * x;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
  const double m1 = s1 / n, m2 = s2 / n, m3 = s3 / n, m4 = s4 / n;
  const double ratio = m2 / (m1 * m1);
  const double var_log = ((m4 - m2 * m2) / (m2 * m2) +
                          4.0 * (m2 - m1 * m1) / (m1 * m1) -
                          4.0 * (m3 - m1 * m2) / (m1 * m2)) /
                         n;
  const double se = ratio * std::sqrt(std::max(0.0, var_log));
  CHECK(std::abs(ratio - 2.0) < 3.0 * se);
}

TEST_CASE("common-mode thermal channels move together") {
  const auto m = ClassicalFieldModel::thermal(1.0, 1.0, /*common_mode=*/true);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto s = m.sample_at(9, i);
    CHECK(s.intensities[0] == s.intensities[1]);
  }
  const auto indep =
      ClassicalFieldModel::thermal(1.0, 1.0, /*common_mode=*/false);
  int equal = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto s = indep.sample_at(9, i);
    if (s.intensities[0] == s.intensities[1]) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("anti-correlated sampler pins the residual channel") {
  const auto m = ClassicalFieldModel::anti_correlated(1.0, 0.01);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto s = m.sample_at(55, i);
    const double lo = std::min(s.intensities[0], s.intensities[1]);
    const double hi = std::max(s.intensities[0], s.intensities[1]);
    CHECK(lo == 0.01);
    CHECK(hi > 0.5);  // 0.99 with sigma 0.05 jitter never gets near 0.5
  }
}

TEST_CASE("anti-correlated channel means converge to total/2") {
  // Each channel is hot half the time: mean = total/2, per-channel sd
  // ~0.49, so se ~ 4.9e-4 at N = 1e6.
  const auto m = ClassicalFieldModel::anti_correlated(1.0, 0.01);
  const std::uint64_t n = 1'000'000;
  double s1 = 0.0, s2 = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto s = m.sample_at(56, i);
    CHECK(s.intensities[0] >= 0.0);
    CHECK(s.intensities[1] >= 0.0);
    s1 += s.intensities[0];
    s2 += s.intensities[1];
  }
  CHECK(std::abs(s1 / n - 0.5) < 3.0 * 4.9e-4);
  CHECK(std::abs(s2 / n - 0.5) < 3.0 * 4.9e-4);
}

TEST_CASE("samplers are reproducible and order-independent") {
  const auto m = ClassicalFieldModel::thermal(1.0, 2.0, false);
  // Same (seed, trial) must give identical samples no matter the call order.
  const auto forward_3 = m.sample_at(42, 3);
  for (std::uint64_t i = 10; i > 0; --i) m.sample_at(42, i - 1);
  const auto again_3 = m.sample_at(42, 3);
  CHECK(forward_3.intensities == again_3.intensities);
  const auto other_seed = m.sample_at(43, 3);
  CHECK(forward_3.intensities != other_seed.intensities);
}

TEST_CASE("custom CSV loads and cycles") {
  const auto m = ClassicalFieldModel::custom_from_csv(
      "trial,i1,i2\n0,1.5,0.5\n1,2.0,0.25\n");
  CHECK(m.sample_at(1, 0).intensities[0] == 1.5);
  CHECK(m.sample_at(1, 1).intensities[1] == 0.25);
  CHECK(m.sample_at(1, 2).intensities[0] == 1.5);  // cycled
}

TEST_CASE("custom CSV rejects negative intensities with a line number") {
  try {
    ClassicalFieldModel::custom_from_csv("trial,i1,i2\n0,1.0,0.5\n1,-0.1,0.5\n");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_config);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(ClassicalFieldModel::custom_from_csv("i1,i2\n1,2\n"), Error);
  CHECK_THROWS_AS(ClassicalFieldModel::custom_from_csv("trial,i1,i2\n0,x,1\n"),
                  Error);
}

TEST_CASE("intra-entangled state: diagonal amplitudes have Schmidt rank 2") {
  ComplexMatrix amps = ComplexMatrix::Zero(2, 2);
  amps(0, 0) = 1.0 / std::sqrt(2.0);
  amps(1, 1) = 1.0 / std::sqrt(2.0);
  const auto psi = intra_entangled_state(2, 2, amps);
  CHECK(std::abs(psi.amplitude(0) - Complex(1 / std::sqrt(2.0), 0)) < 1e-12);
  CHECK(std::abs(psi.amplitude(3) - Complex(1 / std::sqrt(2.0), 0)) < 1e-12);
  CHECK(schmidt_rank(psi, 2, 2) == 2);
}

TEST_CASE("outer-product amplitudes are separable (rank 1)") {
  ComplexVector u(2), w(2);
  u << Complex(0.3, 0.1), Complex(-1.0, 0.5);
  w << Complex(0.8, 0), Complex(0.2, -0.7);
  const ComplexMatrix amps = u * w.transpose();
  CHECK(schmidt_rank(intra_entangled_state(2, 2, amps), 2, 2) == 1);
}

TEST_CASE("generic 2x2 amplitudes have full Schmidt rank") {
  // Singular-value oracle: det != 0 forces two nonzero singular values.
  ComplexMatrix amps(2, 2);
  amps << Complex(0.9, 0.2), Complex(-0.1, 0.4), Complex(0.3, -0.8),
      Complex(0.5, 0.1);
  REQUIRE(std::abs(amps.determinant()) > 1e-6);
  CHECK(schmidt_rank(intra_entangled_state(2, 2, amps), 2, 2) == 2);
}

TEST_CASE("intra-entangled state rejects all-zero amplitudes") {
  CHECK_THROWS_AS(intra_entangled_state(2, 2, ComplexMatrix::Zero(2, 2)),
                  Error);
}

}  // TEST_SUITE
