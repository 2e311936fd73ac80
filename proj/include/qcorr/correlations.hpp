#pragma once

#include <array>
#include <optional>

#include "qcorr/cavity.hpp"
#include "qcorr/matrix.hpp"

namespace qcorr {

/// A von Neumann measurement direction on the Bloch sphere:
/// n = (sin t cos p, sin t sin p, cos t), projectors B_pm = (I pm n.sigma)/2.
struct Measurement {
  double theta;  // in [0, pi]
  double phi;    // in [0, 2 pi)

  std::array<double, 3> axis() const;
  ComplexMatrix projector_plus() const;   // 2x2
  ComplexMatrix projector_minus() const;  // 2x2
};

/// Result of projectively measuring qubit B of a two-qubit state.
/// post_states[i] is absent when probabilities[i] <= 1e-12 (that outcome
/// then contributes zero conditional entropy, the 0 log 0 convention).
struct MeasuredDecomposition {
  std::array<double, 2> probabilities;
  std::array<std::optional<DensityMatrix>, 2> post_states;  // 4x4 each
};

/// Bundle of the three correlation quantities plus the optimal measurement.
/// discord = mutual_info - classical_corr by construction.
struct CorrelationReport {
  double mutual_info;
  double classical_corr;
  double discord;
  Measurement argmin_measurement;
};

struct ClassicalCorrelation {
  double value;
  Measurement argmin;
};

/// Search budget of the conditional-entropy minimizer over measurement
/// directions. The coarse stage samples grid_theta x grid_phi points on
/// theta in [0, pi/2] (inclusive) x phi in [0, 2 pi) (periodic), which
/// covers every projector pair since antipodal directions give the same
/// measurement. Refinement is a compass pattern search started from the
/// best `starts` grid points.
struct MinimizerBudget {
  int grid_theta = 64;
  int grid_phi = 128;
  int starts = 3;
  int refine_iterations = 60;
  double shrink = 0.5;
};

/// S(rho_A) + S(rho_B) - S(rho_AB), in bits.
double mutual_information(const DensityMatrix& rho);

/// Outcome probabilities and post-measurement states of (I (x) B_pm).
MeasuredDecomposition measure_b(const DensityMatrix& rho, const Measurement& m);

/// sum_i p_i S(rho | outcome i), in bits. Uses a closed-form 2x2 path
/// (the B factor collapses to a pure state), equivalent to running
/// measure_b and summing entropies.
double conditional_entropy(const DensityMatrix& rho, const Measurement& m);

/// S(rho_A) minus the minimum conditional entropy over von Neumann
/// measurements on B, with the minimizing direction. Deterministic:
/// grid ties are broken by smallest (theta, phi).
ClassicalCorrelation classical_correlation(
    const DensityMatrix& rho, const MinimizerBudget& budget = MinimizerBudget{});

/// Quantum discord by numerical minimization: mutual information minus
/// classical correlation.
CorrelationReport discord_numeric(
    const DensityMatrix& rho, const MinimizerBudget& budget = MinimizerBudget{});

/// Closed-form mutual information of a Bell-diagonal state:
/// (1/4) sum_k u_k log2 u_k over u in {1 -+ d1 -+ d2 -+ d3} with the four
/// admissible sign patterns.
double bell_diagonal_mutual_information(const CorrelationVector& d);

/// Closed-form classical correlation of a Bell-diagonal state:
/// sum_{s=+-1} (1 + s d)/2 log2(1 + s d) with d = max_k |d_k|.
double bell_diagonal_classical_correlation(const CorrelationVector& d);

/// Closed-form Bell-diagonal discord: the mutual information above minus
/// the classical correlation above. (A formula variant floating around
/// that adds an extra +1 fails the maximally mixed sanity check D = 0 and
/// is deliberately not used.)
double discord_bell_diagonal(const CorrelationVector& d);

/// Concurrence of an arbitrary two-qubit state via the spin-flipped
/// spectrum, computed through the Hermitian equivalent sqrt(rho) *
/// rho_tilde * sqrt(rho) for numerical stability.
double concurrence_general(const DensityMatrix& rho);

/// Closed-form concurrence of an X-form state:
/// 2 max{0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33)}.
/// Throws StateValidationError if the state is not X-form within 1e-9.
double concurrence_xstate(const DensityMatrix& rho);

/// Concurrence of the dephased Werner state: max{0, p fsq - (1-p)/2}.
/// Requires p in [0,1] and fsq in (0,1]; throws std::domain_error otherwise.
double concurrence_model(double p, double fsq);

}  // namespace qcorr
