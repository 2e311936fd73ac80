#include "qcorr/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcorr {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

PhysicalParams PhysicalParams::dimensionless(double gamma_over_omega,
                                             Complex alpha) {
  PhysicalParams p{1.0, gamma_over_omega, alpha, std::nullopt};
  p.validate();
  return p;
}

void PhysicalParams::validate() const {
  require(std::isfinite(omega_eff) && omega_eff > 0.0,
          "physical params: omega_eff must be finite and > 0");
  require(std::isfinite(gamma) && gamma >= 0.0,
          "physical params: gamma must be finite and >= 0");
  require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()),
          "physical params: alpha must be finite");
  if (raw.has_value()) {
    require(raw->delta != 0.0, "physical params: raw delta must be nonzero");
    const double derived = raw->g * raw->g / raw->delta;
    require(std::abs(derived - omega_eff) <= 1e-12 * std::abs(omega_eff),
            "physical params: omega_eff inconsistent with g^2/delta");
  }
}

void SingleAtomInit::validate() const {
  require(zeta_a >= 0.0 && zeta_a <= 1.0,
          "atom init: zeta_a must lie in [0, 1]");
  require(zeta_b >= 0.0 && zeta_b <= 1.0,
          "atom init: zeta_b must lie in [0, 1]");
  require(std::abs(zeta_a + zeta_b - 1.0) <= 1e-12,
          "atom init: populations must sum to 1");
  require(std::norm(zeta_c) <= zeta_a * zeta_b + 1e-12,
          "atom init: |zeta_c|^2 exceeds zeta_a * zeta_b (state not "
          "positive semidefinite)");
}

void WernerSpec::validate() const {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
          "werner spec: p must lie in [0, 1]");
}

CorrelationVector::CorrelationVector(double d1, double d2, double d3)
    : d1_(d1), d2_(d2), d3_(d3) {
  const double slack = 1e-12;
  for (const double d : {d1, d2, d3}) {
    if (!(std::isfinite(d) && std::abs(d) <= 1.0 + slack)) {
      std::ostringstream os;
      os << "correlation vector: component " << d << " outside [-1, 1]";
      throw StateValidationError(os.str());
    }
  }
  d1_ = std::clamp(d1_, -1.0, 1.0);
  d2_ = std::clamp(d2_, -1.0, 1.0);
  d3_ = std::clamp(d3_, -1.0, 1.0);
  // Bell-basis eigenvalues (1 -+ d1 -+ d2 -+ d3)/4 with the four admissible
  // sign patterns must be non-negative.
  const double u[4] = {1.0 - d1_ - d2_ - d3_, 1.0 - d1_ + d2_ + d3_,
                       1.0 + d1_ - d2_ + d3_, 1.0 + d1_ + d2_ - d3_};
  for (const double uk : u) {
    if (uk / 4.0 < -1e-12) {
      std::ostringstream os;
      os << "correlation vector (" << d1_ << ", " << d2_ << ", " << d3_
         << ") is unphysical: Bell-basis eigenvalue " << uk / 4.0 << " < 0";
      throw StateValidationError(os.str());
    }
  }
}

double CorrelationVector::max_abs() const {
  return std::max({std::abs(d1_), std::abs(d2_), std::abs(d3_)});
}

Complex decoherence_factor(const PhysicalParams& params, double t) {
  params.validate();
  if (!(t >= 0.0))
    throw std::domain_error("decoherence_factor: t must be >= 0");
  const double x = params.omega_eff * t;  // dimensionless time
  const double g = params.gamma_over_omega();
  const double a2 = std::norm(params.alpha);
  const Complex i(0.0, 1.0);

  const Complex exponent1 = -i * x + a2 * (std::exp(-2.0 * g * x) - 1.0);
  // gamma / (gamma + i omega) == g / (g + i); zero when gamma == 0.
  const Complex exponent2 =
      (a2 * g / (g + i)) * (1.0 - std::exp(-2.0 * (g + i) * x));
  const Complex exponent3 =
      a2 * std::exp(-2.0 * g * x) * (std::exp(-2.0 * i * x) - 1.0);

  return std::exp(exponent1 + exponent2 + exponent3);
}

double asymptotic_magnitude_sq(const PhysicalParams& params) {
  params.validate();
  if (params.gamma <= 0.0)
    throw std::domain_error(
        "asymptotic_magnitude_sq: needs gamma > 0 (|f| is periodic without "
        "dissipation)");
  const double w2 = params.omega_eff * params.omega_eff;
  const double g2 = params.gamma * params.gamma;
  return std::exp(-2.0 * std::norm(params.alpha) * w2 / (w2 + g2));
}

DensityMatrix single_atom_state(const SingleAtomInit& init,
                                const PhysicalParams& params, double t) {
  init.validate();
  const Complex f = decoherence_factor(params, t);
  const Complex coherence = init.zeta_c * f;
  ComplexMatrix m(2, 2);
  m(0, 0) = init.zeta_a;
  m(1, 1) = init.zeta_b;
  m(0, 1) = coherence;
  m(1, 0) = std::conj(coherence);
  return DensityMatrix::checked(std::move(m));
}

DensityMatrix werner_initial(const WernerSpec& spec) {
  spec.validate();
  const double p = spec.p;
  ComplexMatrix m(4, 4);
  if (spec.family == WernerFamily::Phi) {
    m(0, 0) = (1.0 - p) / 4.0;
    m(1, 1) = (1.0 + p) / 4.0;
    m(2, 2) = (1.0 + p) / 4.0;
    m(3, 3) = (1.0 - p) / 4.0;
    m(1, 2) = p / 2.0;
    m(2, 1) = p / 2.0;
  } else {
    m(0, 0) = (1.0 + p) / 4.0;
    m(1, 1) = (1.0 - p) / 4.0;
    m(2, 2) = (1.0 - p) / 4.0;
    m(3, 3) = (1.0 + p) / 4.0;
    m(0, 3) = p / 2.0;
    m(3, 0) = p / 2.0;
  }
  return DensityMatrix::checked(std::move(m));
}

DensityMatrix two_atom_state(const WernerSpec& spec,
                             const PhysicalParams& params, double t) {
  const DensityMatrix initial = werner_initial(spec);
  const Complex f = decoherence_factor(params, t);
  // Dephasing factor for one qubit: 1 on populations, f on |e><g|, conj(f)
  // on |g><e|. Qubit basis index: 0 = excited, 1 = ground.
  const auto factor = [&f](std::size_t bra, std::size_t ket) -> Complex {
    if (bra == ket) return Complex(1.0, 0.0);
    return (bra == 0) ? f : std::conj(f);
  };
  ComplexMatrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t a_bra = i >> 1, b_bra = i & 1;
      const std::size_t a_ket = j >> 1, b_ket = j & 1;
      m(i, j) = initial(i, j) * factor(a_bra, a_ket) * factor(b_bra, b_ket);
    }
  return DensityMatrix::checked(std::move(m));
}

CorrelationVector correlation_vector(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw std::invalid_argument("correlation_vector: state must be 4x4");
  const double tol = 1e-9;

  // Entries outside the diagonal and the two anti-diagonal pairs must vanish.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool structural = (i == j) || (i + j == 3);
      if (!structural && std::abs(rho(i, j)) > tol)
        throw StateValidationError(
            "correlation_vector: state is not X-form within tolerance");
    }
  if (std::abs(rho(0, 0) - rho(3, 3)) > tol ||
      std::abs(rho(1, 1) - rho(2, 2)) > tol)
    throw StateValidationError(
        "correlation_vector: paired diagonal entries differ (state is not "
        "Bell-diagonal up to a local phase)");

  const double r14 = std::abs(rho(0, 3));
  const double r23 = std::abs(rho(1, 2));
  if (r14 > tol && r23 > tol)
    throw StateValidationError(
        "correlation_vector: both anti-diagonal entries are nonzero (state "
        "is not Bell-diagonal up to a local phase)");

  const double d3 = 4.0 * rho(0, 0).real() - 1.0;
  double d1 = 0.0, d2 = 0.0;
  if (r23 > r14) {
    // Surviving coherence between |eg> and |ge>: d1 = d2.
    d1 = 2.0 * r23;
    d2 = d1;
  } else if (r14 > 0.0) {
    // Surviving coherence between |ee> and |gg>: d2 = -d1.
    d1 = 2.0 * r14;
    d2 = -d1;
  }
  return CorrelationVector(d1, d2, d3);
}

DensityMatrix bell_diagonal_state(const CorrelationVector& d) {
  ComplexMatrix m = ComplexMatrix::identity(4);
  const ComplexMatrix terms[3] = {kron(pauli_x(), pauli_x()),
                                  kron(pauli_y(), pauli_y()),
                                  kron(pauli_z(), pauli_z())};
  const double coeffs[3] = {d.d1(), d.d2(), d.d3()};
  for (int k = 0; k < 3; ++k) m += coeffs[k] * terms[k];
  m *= 0.25;
  return DensityMatrix::checked(std::move(m));
}

CorrelationVector model_correlation_vector(const WernerSpec& spec,
                                           double fsq) {
  spec.validate();
  if (!(fsq > 0.0 && fsq <= 1.0))
    throw std::domain_error(
        "model_correlation_vector: fsq must lie in (0, 1]");
  const double q = spec.p * fsq;
  if (spec.family == WernerFamily::Phi)
    return CorrelationVector(q, q, -spec.p);
  return CorrelationVector(q, -q, spec.p);
}

DispersiveReport dispersive_validity(const PhysicalParams& params,
                                     int n_relevant) {
  params.validate();
  if (!params.raw.has_value())
    throw std::invalid_argument(
        "dispersive_validity: raw cavity parameters are required");
  if (n_relevant < 0)
    throw std::invalid_argument("dispersive_validity: n_relevant must be >= 0");
  const double ratio = std::abs(params.raw->delta) /
                       (std::sqrt(static_cast<double>(n_relevant) + 1.0) *
                        std::abs(params.raw->g));
  return DispersiveReport{ratio, ratio < 10.0};
}

}  // namespace qcorr
