#pragma once

#include <optional>

#include "qcorr/matrix.hpp"

namespace qcorr {

/// Raw atom-cavity parameters, only needed for dispersive-regime diagnostics.
struct RawCavityParams {
  double g;       // atom-cavity coupling
  double delta;   // detuning (omega0 - omega)
  double omega;   // cavity frequency
  double omega0;  // atomic transition frequency
};

/// Physical parameters of one atom-cavity unit. Both cavities are assumed
/// identical (equal alpha, gamma, coupling); asymmetric setups are out of
/// scope. Internally everything runs on the dimensionless pair
/// (omega_eff * t, gamma / omega_eff).
struct PhysicalParams {
  double omega_eff;  // effective dispersive shift, > 0
  double gamma;      // cavity decay rate, >= 0, same units as omega_eff
  Complex alpha;     // coherent field amplitude (dimensionless)
  std::optional<RawCavityParams> raw;

  /// Convenience factory with omega_eff = 1, so t means omega_eff * t.
  static PhysicalParams dimensionless(double gamma_over_omega, Complex alpha);

  /// Throws std::invalid_argument on out-of-range values or an inconsistent
  /// raw parameter set (omega_eff must equal g^2/delta within 1e-12 relative).
  void validate() const;

  double gamma_over_omega() const { return gamma / omega_eff; }
};

/// Initial 2x2 atomic state: diag(zeta_a, zeta_b) with coherence zeta_c
/// on the excited-ground off-diagonal.
struct SingleAtomInit {
  double zeta_a;
  double zeta_b;
  Complex zeta_c;

  void validate() const;  // throws std::invalid_argument
};

enum class WernerFamily { Phi, Psi };

/// Werner mixture: p * |Bell><Bell| + (1-p)/4 * I. Family Phi uses the
/// (|eg> + |ge>)/sqrt(2) Bell state, Psi uses (|ee> + |gg>)/sqrt(2).
struct WernerSpec {
  double p;
  WernerFamily family = WernerFamily::Phi;

  void validate() const;  // throws std::invalid_argument if p outside [0,1]
};

/// Correlation triple (d1, d2, d3) of a Bell-diagonal two-qubit state:
/// rho = (I + sum_k d_k sigma_k (x) sigma_k) / 4. Construction validates
/// |d_k| <= 1 and positivity of the four Bell-basis eigenvalues.
class CorrelationVector {
 public:
  CorrelationVector(double d1, double d2, double d3);

  double d1() const { return d1_; }
  double d2() const { return d2_; }
  double d3() const { return d3_; }
  double max_abs() const;

 private:
  double d1_, d2_, d3_;
};

/// The complex factor multiplying the atomic coherence at time t >= 0:
/// a product of three exponentials combining the dispersive phase, the
/// photon-loss damping, and the field-induced collapse/revival phases.
/// Modulus in (0, 1], equal to 1 at t = 0.
Complex decoherence_factor(const PhysicalParams& params, double t);

/// lim_{t->inf} |f(t)|^2 = exp(-2 |alpha|^2 omega^2 / (omega^2 + gamma^2)).
/// Requires gamma > 0 (for gamma = 0 the modulus is periodic, no limit).
double asymptotic_magnitude_sq(const PhysicalParams& params);

/// 2x2 atomic state at time t: diagonal preserved, coherence multiplied by
/// the decoherence factor.
DensityMatrix single_atom_state(const SingleAtomInit& init,
                                const PhysicalParams& params, double t);

/// 4x4 Werner initial state in the basis |ee>, |eg>, |ge>, |gg>.
DensityMatrix werner_initial(const WernerSpec& spec);

/// Two-atom state at time t: the single-qubit dephasing map (coherence times
/// f(t), diagonal fixed) applied locally to each qubit of the Werner state.
DensityMatrix two_atom_state(const WernerSpec& spec,
                             const PhysicalParams& params, double t);

/// Extracts (d1, d2, d3) from an X-form state with equal paired diagonals
/// (rho11 = rho44, rho22 = rho33) and at most one nonzero anti-diagonal
/// entry, i.e. a Bell-diagonal state up to a local phase rotation. The
/// phase of the surviving off-diagonal is removed first (discord and
/// concurrence are invariant under that local z-rotation). Throws
/// StateValidationError if the input is outside this class beyond 1e-9.
CorrelationVector correlation_vector(const DensityMatrix& rho);

/// Builds the Bell-diagonal state (I + sum_k d_k sigma_k (x) sigma_k) / 4.
DensityMatrix bell_diagonal_state(const CorrelationVector& d);

/// Correlation triple of the locally dephased Werner state once the
/// coherence magnitude has decayed to fsq = |f|^2:
/// Phi family -> (p fsq, p fsq, -p); Psi family -> (p fsq, -p fsq, p).
CorrelationVector model_correlation_vector(const WernerSpec& spec, double fsq);

struct DispersiveReport {
  double ratio;  // |delta| / (sqrt(n+1) * g)
  bool warning;  // set when ratio < 10
};

/// Checks the dispersive-regime condition for photon numbers up to
/// n_relevant. Requires raw parameters; throws std::invalid_argument if
/// they are absent or n_relevant < 0.
DispersiveReport dispersive_validity(const PhysicalParams& params,
                                     int n_relevant);

}  // namespace qcorr
