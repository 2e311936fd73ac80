#pragma once

#include <optional>
#include <vector>

#include "qcorr/cavity.hpp"
#include "qcorr/matrix.hpp"

namespace qcorr {

/// Truncated field Hilbert space keeping Fock states |0> .. |n_max>.
struct FockSpace {
  int n_max;
};

/// Suggested truncation: 16 covers |alpha| <= 1 with Poisson tail mass far
/// below 1e-13; larger amplitudes get ceil(|alpha|^2 + 8 |alpha| + 8).
int default_fock_cutoff(Complex alpha);

/// Fixed-step classical RK4 configuration. dt_omega is the step in units of
/// 1/omega_eff; it must satisfy dt_omega * (n_max + 1) <= 0.05 so the
/// fastest dispersive phase omega_eff (n+1) is resolved.
struct IntegratorConfig {
  double dt_omega = 0.002;
};

/// Truncated coherent-state amplitude vector (length n_max + 1),
/// renormalized to unit norm. Throws std::invalid_argument when the
/// truncated tail mass exceeds 1e-10.
std::vector<Complex> coherent_vector(Complex alpha, const FockSpace& fock);

/// Diagonal dispersive interaction on the joint atom-field space,
/// atom index major, Fock index minor: omega_eff (n+1) on |e,n> and
/// -omega_eff n on |g,n>.
ComplexMatrix build_interaction(const PhysicalParams& params,
                                const FockSpace& fock);

/// Right-hand side of the master equation: -i [V, rho] + gamma (2 a rho a+
/// - a+a rho - rho a+a), the annihilator acting on the field factor only.
ComplexMatrix liouvillian_apply(const ComplexMatrix& rho,
                                const PhysicalParams& params,
                                const FockSpace& fock);
ComplexMatrix liouvillian_apply(const DensityMatrix& rho,
                                const PhysicalParams& params,
                                const FockSpace& fock);

struct EvolveResult {
  FockSpace fock;
  std::vector<double> times;          // uniform over [0, t_end]
  std::vector<DensityMatrix> states;  // dim 2 (n_max + 1), validated
};

/// Integrates the master equation from rho_atom(0) (x) |alpha><alpha| with
/// fixed-step RK4, re-symmetrizing after every step. Snapshots are taken at
/// n_snapshots uniform times and validated with Hermiticity/trace floors of
/// 1e-9 and a positivity floor of 1e-7 (integration round-off budget).
/// When fock is absent the default cutoff for alpha is used. Throws
/// std::invalid_argument when the step-size or truncation invariant is
/// violated.
EvolveResult evolve(const SingleAtomInit& init, Complex alpha,
                    const PhysicalParams& params, double t_end,
                    const IntegratorConfig& cfg,
                    std::optional<FockSpace> fock = std::nullopt,
                    int n_snapshots = 201);

/// Max over t_grid of |rho_eg_numeric(t) - zeta_c * f(t)| where
/// rho_eg_numeric comes from tracing the integrated joint state over the
/// field. This is the independent cross-check of the analytic decoherence
/// factor. Requires zeta_c != 0.
double verify_against_analytic(const SingleAtomInit& init, Complex alpha,
                               const PhysicalParams& params,
                               const std::vector<double>& t_grid,
                               const IntegratorConfig& cfg,
                               std::optional<FockSpace> fock = std::nullopt);

}  // namespace qcorr
