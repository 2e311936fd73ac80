// Tests for the correlation measures: mutual information, projective
// measurements on qubit B, conditional entropy, the measurement minimizer,
// closed-form Bell-diagonal discord, and the three concurrence routes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "qcorr/cavity.hpp"
#include "qcorr/correlations.hpp"
#include "test_helpers.hpp"

using namespace qcorr;
using qcorr::testing::frozen::kClassicalCorrD08;
using qcorr::testing::frozen::kDiscord02_02_m08;
using qcorr::testing::frozen::kDiscordWernerP04;
using qcorr::testing::frozen::kWernerP04MutualInfo;
using qcorr::testing::random_density;
using qcorr::testing::random_unitary;

namespace {

constexpr double kPi = 3.14159265358979323846;

DensityMatrix maximally_mixed() {
  ComplexMatrix m = ComplexMatrix::identity(4);
  m *= 0.25;
  return DensityMatrix::checked(std::move(m));
}

DensityMatrix bell_state() {
  return werner_initial(WernerSpec{1.0, WernerFamily::Phi});
}

DensityMatrix random_product_state(std::mt19937& rng) {
  return DensityMatrix::checked(
      kron(random_density(rng, 2), random_density(rng, 2)));
}

}  // namespace

TEST_CASE("mutual information: zero for the maximally mixed state") {
  CHECK(std::abs(mutual_information(maximally_mixed())) <= 1e-12);
}

TEST_CASE("mutual information: 2 bits for a Bell state") {
  CHECK(std::abs(mutual_information(bell_state()) - 2.0) <= 1e-9);
}

TEST_CASE("mutual information of the p = 0.4 Werner state matches the "
          "frozen reference") {
  const DensityMatrix rho = werner_initial(WernerSpec{0.4, WernerFamily::Phi});
  CHECK(std::abs(mutual_information(rho) - kWernerP04MutualInfo) <= 1e-10);
}

TEST_CASE("mutual information vanishes on product states") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    CHECK(std::abs(mutual_information(random_product_state(rng))) <= 1e-9);
  }
}

TEST_CASE("measurement projectors are complementary rank-1 projectors") {
  for (const Measurement m :
       {Measurement{0.0, 0.0}, Measurement{1.1, 2.3}, Measurement{kPi, 4.0}}) {
    const ComplexMatrix plus = m.projector_plus();
    const ComplexMatrix minus = m.projector_minus();
    CHECK((plus + minus).max_abs_diff(ComplexMatrix::identity(2)) <= 1e-14);
    CHECK((plus * plus).max_abs_diff(plus) <= 1e-14);
    CHECK((minus * minus).max_abs_diff(minus) <= 1e-14);
    CHECK(std::abs(plus.trace() - Complex(1.0, 0.0)) <= 1e-14);
  }
}

TEST_CASE("measuring B of the maximally mixed state: fair coin, mixed A") {
  const Measurement m{0.7, 1.9};
  const MeasuredDecomposition dec = measure_b(maximally_mixed(), m);
  CHECK(std::abs(dec.probabilities[0] - 0.5) <= 1e-12);
  CHECK(std::abs(dec.probabilities[1] - 0.5) <= 1e-12);
  for (int i = 0; i < 2; ++i) {
    REQUIRE(dec.post_states[i].has_value());
    // A part must be I/2; B part the outcome projector.
    const ComplexMatrix reduced_a =
        partial_trace(dec.post_states[i]->matrix(), 2, 2, Subsystem::A);
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= 0.5;
    CHECK(reduced_a.max_abs_diff(half) <= 1e-12);
  }
  const ComplexMatrix plus_b =
      partial_trace(dec.post_states[0]->matrix(), 2, 2, Subsystem::B);
  CHECK(plus_b.max_abs_diff(m.projector_plus()) <= 1e-12);
}

TEST_CASE("measuring B of the one-excitation Bell state along z collapses "
          "A to the opposite basis state") {
  const MeasuredDecomposition dec = measure_b(bell_state(), Measurement{0, 0});
  CHECK(std::abs(dec.probabilities[0] - 0.5) <= 1e-12);
  CHECK(std::abs(dec.probabilities[1] - 0.5) <= 1e-12);
  // Outcome +: B projected on |e> (index 0), so the state is |ge><ge|.
  REQUIRE(dec.post_states[0].has_value());
  CHECK(std::abs((*dec.post_states[0])(2, 2) - Complex(1.0, 0.0)) <= 1e-12);
  // Outcome -: B projected on |g>, so the state is |eg><eg|.
  REQUIRE(dec.post_states[1].has_value());
  CHECK(std::abs((*dec.post_states[1])(1, 1) - Complex(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("measuring B of a product state leaves A untouched") {
  std::mt19937 rng(991);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho_a = random_density(rng, 2);
    const ComplexMatrix rho_b = random_density(rng, 2);
    const DensityMatrix rho = DensityMatrix::checked(kron(rho_a, rho_b));
    const Measurement m{2.2, 0.4};
    const MeasuredDecomposition dec = measure_b(rho, m);
    CHECK(std::abs(dec.probabilities[0] + dec.probabilities[1] - 1.0) <=
          1e-12);
    for (int i = 0; i < 2; ++i) {
      if (!dec.post_states[i].has_value()) continue;
      const ComplexMatrix reduced_a =
          partial_trace(dec.post_states[i]->matrix(), 2, 2, Subsystem::A);
      CHECK(reduced_a.max_abs_diff(rho_a) <= 1e-10);
    }
  }
}

TEST_CASE("conditional entropy of a Bell state vanishes for any "
          "measurement") {
  for (const Measurement m :
       {Measurement{0.0, 0.0}, Measurement{kPi / 2, 0.0},
        Measurement{1.234, 5.4}}) {
    CHECK(std::abs(conditional_entropy(bell_state(), m)) <= 1e-9);
  }
}

TEST_CASE("conditional entropy of the maximally mixed state is 1 bit") {
  CHECK(std::abs(conditional_entropy(maximally_mixed(),
                                     Measurement{0.9, 2.2}) -
                 1.0) <= 1e-12);
}

TEST_CASE("conditional entropy of a product state equals S(A) regardless of "
          "the measurement") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho_a = random_density(rng, 2);
    const DensityMatrix rho =
        DensityMatrix::checked(kron(rho_a, random_density(rng, 2)));
    const double s_a =
        entropy_from_eigenvalues(hermitian_eigenvalues(rho_a));
    for (const Measurement m :
         {Measurement{0.0, 0.0}, Measurement{1.3, 0.8},
          Measurement{2.9, 4.4}}) {
      CHECK(std::abs(conditional_entropy(rho, m) - s_a) <= 1e-10);
    }
  }
}

TEST_CASE("conditional entropy agrees with the explicit measure-and-sum "
          "route") {
  std::mt19937 rng(646464);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  const PhysicalParams params =
      PhysicalParams::dimensionless(0.05, Complex(0.9, 0.0));
  for (int trial = 0; trial < 20; ++trial) {
    const WernerFamily fam =
        (trial % 2 == 0) ? WernerFamily::Phi : WernerFamily::Psi;
    const DensityMatrix rho = two_atom_state(
        WernerSpec{0.05 + 0.045 * trial, fam}, params, 0.3 * trial);
    const Measurement m{angle(rng), 2.0 * angle(rng)};
    const MeasuredDecomposition dec = measure_b(rho, m);
    double summed = 0.0;
    for (int i = 0; i < 2; ++i) {
      if (!dec.post_states[i].has_value()) continue;
      summed += dec.probabilities[i] * von_neumann_entropy(*dec.post_states[i]);
    }
    CHECK(std::abs(conditional_entropy(rho, m) - summed) <= 1e-10);
  }
}

TEST_CASE("classical correlation of the maximally mixed state vanishes") {
  CHECK(std::abs(classical_correlation(maximally_mixed()).value) <= 1e-9);
}

TEST_CASE("classical correlation of a Bell state is 1 bit") {
  CHECK(std::abs(classical_correlation(bell_state()).value - 1.0) <= 1e-9);
}

TEST_CASE("classical correlation at max |d| = 0.8 matches the frozen "
          "reference and finds the dominant axis") {
  SUBCASE("z-dominant triple") {
    const DensityMatrix rho =
        bell_diagonal_state(CorrelationVector(0.2, 0.2, -0.8));
    const ClassicalCorrelation cc = classical_correlation(rho);
    CHECK(std::abs(cc.value - kClassicalCorrD08) <= 1e-9);
    CHECK(std::abs(cc.argmin.axis()[2]) >= std::cos(2.0 * kPi / 180.0));
  }
  SUBCASE("x-dominant triple") {
    const DensityMatrix rho =
        bell_diagonal_state(CorrelationVector(0.8, -0.4, 0.2));
    const ClassicalCorrelation cc = classical_correlation(rho);
    CHECK(std::abs(cc.value - kClassicalCorrD08) <= 1e-9);
    CHECK(std::abs(cc.argmin.axis()[0]) >= std::cos(2.0 * kPi / 180.0));
  }
}

TEST_CASE("default minimizer budget agrees with a much denser grid") {
  const MinimizerBudget dense{256, 512, 1, 0, 0.5};
  std::mt19937 rng(555000);
  const DensityMatrix states[3] = {
      bell_diagonal_state(CorrelationVector(0.35, 0.35, -0.5)),
      bell_diagonal_state(CorrelationVector(0.6, -0.6, 0.6)),
      DensityMatrix::checked(random_density(rng, 4))};
  for (const DensityMatrix& rho : states) {
    const double fast = classical_correlation(rho).value;
    const double exhaustive = classical_correlation(rho, dense).value;
    // The refined default search must match (or beat) the dense grid.
    CHECK(fast >= exhaustive - 1e-9);
    CHECK(std::abs(fast - exhaustive) <= 1e-5);
  }
}

TEST_CASE("classical correlation validates its budget") {
  const DensityMatrix rho = maximally_mixed();
  CHECK_THROWS_AS(classical_correlation(rho, MinimizerBudget{1, 8, 1, 0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(classical_correlation(rho, MinimizerBudget{8, 8, 0, 0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      classical_correlation(rho, MinimizerBudget{8, 8, 1, 10, 1.5}),
      std::invalid_argument);
}

TEST_CASE("numeric discord: maximally mixed and product states carry none") {
  CHECK(std::abs(discord_numeric(maximally_mixed()).discord) <= 1e-9);
  std::mt19937 rng(789789);
  for (int trial = 0; trial < 8; ++trial) {
    const CorrelationReport r = discord_numeric(random_product_state(rng));
    CHECK(std::abs(r.discord) <= 1e-6);
  }
}

TEST_CASE("numeric discord of a Bell state is 1 bit") {
  const CorrelationReport r = discord_numeric(bell_state());
  CHECK(std::abs(r.discord - 1.0) <= 1e-6);
  CHECK(std::abs(r.mutual_info - 2.0) <= 1e-9);
  CHECK(std::abs(r.classical_corr - 1.0) <= 1e-6);
}

TEST_CASE("numeric discord report is internally consistent") {
  const DensityMatrix rho =
      bell_diagonal_state(CorrelationVector(0.3, 0.3, -0.55));
  const CorrelationReport r = discord_numeric(rho);
  CHECK(r.discord == r.mutual_info - r.classical_corr);
}

TEST_CASE("closed-form Bell-diagonal discord at reference points") {
  CHECK(std::abs(discord_bell_diagonal(CorrelationVector(0, 0, 0))) <= 1e-15);
  CHECK(std::abs(discord_bell_diagonal(CorrelationVector(1, 1, -1)) - 1.0) <=
        1e-12);
  CHECK(std::abs(discord_bell_diagonal(CorrelationVector(1, -1, 1)) - 1.0) <=
        1e-12);
  CHECK(std::abs(discord_bell_diagonal(CorrelationVector(0.4, 0.4, -0.4)) -
                 kDiscordWernerP04) <= 1e-12);
  CHECK(std::abs(discord_bell_diagonal(CorrelationVector(0.2, 0.2, -0.8)) -
                 kDiscord02_02_m08) <= 1e-12);
}

TEST_CASE("closed-form pieces match the generic routines on Bell-diagonal "
          "states") {
  for (const auto& triple :
       {std::array<double, 3>{0.4, 0.4, -0.4},
        std::array<double, 3>{0.2, 0.2, -0.8},
        std::array<double, 3>{0.5, -0.5, 0.5}}) {
    const CorrelationVector d(triple[0], triple[1], triple[2]);
    const DensityMatrix rho = bell_diagonal_state(d);
    CHECK(std::abs(bell_diagonal_mutual_information(d) -
                   mutual_information(rho)) <= 1e-10);
    CHECK(std::abs(bell_diagonal_classical_correlation(d) -
                   classical_correlation(rho).value) <= 1e-6);
    CHECK(std::abs(discord_bell_diagonal(d) -
                   discord_numeric(rho).discord) <= 1e-6);
  }
}

TEST_CASE("concurrence: separable references give zero, Bell gives one") {
  CHECK(concurrence_general(maximally_mixed()) == 0.0);
  CHECK(std::abs(concurrence_general(bell_state()) - 1.0) <= 1e-12);
  CHECK(std::abs(concurrence_xstate(bell_state()) - 1.0) <= 1e-12);
  std::mt19937 rng(3141);
  for (int trial = 0; trial < 10; ++trial) {
    CHECK(concurrence_general(random_product_state(rng)) <= 1e-8);
  }
}

TEST_CASE("X-form concurrence at the exact-threshold operating point") {
  const DensityMatrix rho = werner_initial(WernerSpec{0.4, WernerFamily::Phi});
  CHECK(std::abs(concurrence_xstate(rho) - 0.1) <= 1e-15);
  CHECK(std::abs(concurrence_model(0.4, 1.0) - 0.1) <= 1e-15);
}

TEST_CASE("X-form concurrence vanishes below the mixing threshold") {
  const PhysicalParams params =
      PhysicalParams::dimensionless(0.0, Complex(1.0, 0.0));
  // p = 0.4, |f|^2 = 0.5: p fsq = 0.2 < (1-p)/2 = 0.3.
  const CorrelationVector d =
      model_correlation_vector(WernerSpec{0.4, WernerFamily::Phi}, 0.5);
  CHECK(concurrence_xstate(bell_diagonal_state(d)) == 0.0);
  CHECK(concurrence_model(0.4, 0.5) == 0.0);
  // p <= 1/3 never has entanglement.
  for (const double fsq : {0.2, 0.7, 1.0}) {
    CHECK(concurrence_model(1.0 / 3.0, fsq) == 0.0);
    CHECK(concurrence_model(0.2, fsq) == 0.0);
  }
  (void)params;
}

TEST_CASE("concurrence input validation") {
  ComplexMatrix m = ComplexMatrix::identity(4);
  m *= 0.25;
  m(0, 1) = Complex(0.05, 0.0);
  m(1, 0) = Complex(0.05, 0.0);
  CHECK_THROWS_AS(concurrence_xstate(DensityMatrix::checked(m)),
                  StateValidationError);
  CHECK_THROWS_AS(concurrence_model(1.4, 0.5), std::domain_error);
  CHECK_THROWS_AS(concurrence_model(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(concurrence_model(0.5, 1.2), std::domain_error);
  CHECK(std::abs(concurrence_model(1.0, 1.0) - 1.0) <= 1e-15);
}

TEST_CASE("the three concurrence routes agree on evolved states") {
  const PhysicalParams params =
      PhysicalParams::dimensionless(0.02, Complex(0.9, 0.0));
  for (const WernerFamily fam : {WernerFamily::Phi, WernerFamily::Psi}) {
    for (const double p : {0.2, 0.45, 0.7, 0.95}) {
      for (const double t : {0.1, 0.6, 1.3, 3.0}) {
        const DensityMatrix rho = two_atom_state(WernerSpec{p, fam}, params, t);
        const double fsq = std::norm(decoherence_factor(params, t));
        const double via_x = concurrence_xstate(rho);
        CHECK(std::abs(via_x - concurrence_general(rho)) <= 1e-8);
        CHECK(std::abs(via_x - concurrence_model(p, fsq)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("ordering invariants on the model family: I >= J >= 0 and "
          "discord strictly positive while coherence survives") {
  for (const WernerFamily fam : {WernerFamily::Phi, WernerFamily::Psi}) {
    for (const double p : {0.1, 0.4, 0.7, 1.0}) {
      for (const double fsq : {1e-3, 0.05, 0.3, 0.75, 1.0}) {
        const CorrelationVector d =
            model_correlation_vector(WernerSpec{p, fam}, fsq);
        const double info = bell_diagonal_mutual_information(d);
        const double classical = bell_diagonal_classical_correlation(d);
        const double discord = discord_bell_diagonal(d);
        CHECK(info >= classical - 1e-12);
        CHECK(classical >= 0.0);
        CHECK(discord > 0.0);
      }
    }
  }
}

TEST_CASE("numeric discord is invariant under local unitaries") {
  std::mt19937 rng(8675309);
  const CorrelationVector triples[3] = {
      CorrelationVector(0.4, 0.4, -0.4), CorrelationVector(0.18, -0.18, 0.6),
      CorrelationVector(0.72, 0.72, -0.9)};
  for (const CorrelationVector& d : triples) {
    const DensityMatrix rho = bell_diagonal_state(d);
    const double base = discord_numeric(rho).discord;
    CHECK(std::abs(base - discord_bell_diagonal(d)) <= 1e-6);
    for (int trial = 0; trial < 4; ++trial) {
      const ComplexMatrix u =
          kron(random_unitary(rng, 2), random_unitary(rng, 2));
      const DensityMatrix rotated =
          DensityMatrix::checked(u * rho.matrix() * u.adjoint());
      CHECK(std::abs(discord_numeric(rotated).discord - base) <= 1e-6);
    }
  }
}

TEST_CASE("argmin measurement aligns with the dominant correlation axis on "
          "model states") {
  const double cos_two_deg = std::cos(2.0 * kPi / 180.0);
  for (const WernerFamily fam : {WernerFamily::Phi, WernerFamily::Psi}) {
    for (const double p : {0.2, 0.5, 0.9}) {
      for (const double fsq : {0.1, 0.5, 0.9}) {
        const CorrelationVector d =
            model_correlation_vector(WernerSpec{p, fam}, fsq);
        const DensityMatrix rho = bell_diagonal_state(d);
        const auto axis = discord_numeric(rho).argmin_measurement.axis();
        // The z component dominates: |d3| = p > p * fsq.
        CHECK(std::abs(axis[2]) >= cos_two_deg);
      }
    }
  }
}
