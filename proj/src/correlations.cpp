#include "qcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace qcorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroProbability = 1e-12;

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

/// Components of one measurement-outcome direction |b> on qubit B.
struct OutcomeVector {
  Complex b0;
  Complex b1;
};

/// The +1 and -1 eigenvectors of n . sigma for the measurement direction.
std::array<OutcomeVector, 2> outcome_vectors(const Measurement& m) {
  const double half = 0.5 * m.theta;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const Complex ephi = std::polar(1.0, m.phi);
  return {OutcomeVector{c, s * ephi}, OutcomeVector{s, -c * ephi}};
}

/// Hermitian 2x2 block M with M_{a a'} = <b| rho_{a a'} |b>, where rho_{a a'}
/// is the 2x2 B-block of the two-qubit state for A-indices (a, a'). Its trace
/// is the outcome probability; M / tr(M) is the post-measurement state of A.
struct CollapsedBlock {
  double m00;
  double m11;
  Complex m01;

  double probability() const { return m00 + m11; }
};

CollapsedBlock collapsed_block(const ComplexMatrix& rho,
                               const OutcomeVector& b) {
  const Complex bv[2] = {b.b0, b.b1};
  auto element = [&](std::size_t a_bra, std::size_t a_ket) {
    Complex sum = 0.0;
    for (std::size_t beta = 0; beta < 2; ++beta)
      for (std::size_t beta2 = 0; beta2 < 2; ++beta2)
        sum += std::conj(bv[beta]) * rho(2 * a_bra + beta, 2 * a_ket + beta2) *
               bv[beta2];
    return sum;
  };
  CollapsedBlock m;
  m.m00 = element(0, 0).real();
  m.m11 = element(1, 1).real();
  m.m01 = element(0, 1);
  return m;
}

/// p * S(M / p) for the Hermitian 2x2 block, in bits; 0 when p is negligible.
double weighted_block_entropy(const CollapsedBlock& m) {
  const double p = m.probability();
  if (p <= kZeroProbability) return 0.0;
  const double gap = m.m00 - m.m11;
  const double disc = std::sqrt(gap * gap + 4.0 * std::norm(m.m01));
  double entropy = 0.0;
  for (const double mu : {0.5 * (p + disc), 0.5 * (p - disc)}) {
    const double q = std::clamp(mu / p, 0.0, 1.0);
    if (q > 0.0) entropy -= q * std::log2(q);
  }
  return p * entropy;
}

double xlog2x(double u) { return u > 0.0 ? u * std::log2(u) : 0.0; }

std::array<double, 4> bell_basis_u(const CorrelationVector& d) {
  return {1.0 - d.d1() - d.d2() - d.d3(), 1.0 - d.d1() + d.d2() + d.d3(),
          1.0 + d.d1() - d.d2() + d.d3(), 1.0 + d.d1() + d.d2() - d.d3()};
}

/// Wraps a candidate point back into theta in [0, pi], phi in [0, 2 pi).
Measurement canonical(double theta, double phi) {
  if (theta < 0.0) {
    theta = -theta;
    phi += kPi;
  }
  if (theta > kPi) {
    theta = 2.0 * kPi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  return Measurement{theta, phi};
}

struct Candidate {
  double value;
  Measurement m;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.m.theta != b.m.theta) return a.m.theta < b.m.theta;
  return a.m.phi < b.m.phi;
}

}  // namespace

std::array<double, 3> Measurement::axis() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

ComplexMatrix Measurement::projector_plus() const {
  const auto [nx, ny, nz] = axis();
  ComplexMatrix b(2, 2);
  b(0, 0) = 0.5 * (1.0 + nz);
  b(1, 1) = 0.5 * (1.0 - nz);
  b(0, 1) = 0.5 * Complex(nx, -ny);
  b(1, 0) = 0.5 * Complex(nx, ny);
  return b;
}

ComplexMatrix Measurement::projector_minus() const {
  return ComplexMatrix::identity(2) - projector_plus();
}

double mutual_information(const DensityMatrix& rho) {
  require(rho.dim() == 4, "mutual_information: state must be 4x4");
  const double s_ab = von_neumann_entropy(rho);
  const double s_a = entropy_from_eigenvalues(
      hermitian_eigenvalues(partial_trace(rho.matrix(), 2, 2, Subsystem::A)));
  const double s_b = entropy_from_eigenvalues(
      hermitian_eigenvalues(partial_trace(rho.matrix(), 2, 2, Subsystem::B)));
  return s_a + s_b - s_ab;
}

MeasuredDecomposition measure_b(const DensityMatrix& rho,
                                const Measurement& m) {
  require(rho.dim() == 4, "measure_b: state must be 4x4");
  const auto outcomes = outcome_vectors(m);
  MeasuredDecomposition out;
  double total = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const OutcomeVector& b = outcomes[i];
    const CollapsedBlock block = collapsed_block(rho.matrix(), b);
    const double p = block.probability();
    total += p;
    out.probabilities[i] = std::clamp(p, 0.0, 1.0);
    if (p <= kZeroProbability) continue;

    // Post state is exactly (M / p) (x) |b><b|; both factors are built
    // Hermitian by construction.
    ComplexMatrix ma(2, 2);
    ma(0, 0) = block.m00 / p;
    ma(1, 1) = block.m11 / p;
    ma(0, 1) = block.m01 / p;
    ma(1, 0) = std::conj(block.m01) / p;
    ComplexMatrix bb(2, 2);
    bb(0, 0) = std::norm(b.b0);
    bb(1, 1) = std::norm(b.b1);
    bb(0, 1) = b.b0 * std::conj(b.b1);
    bb(1, 0) = std::conj(bb(0, 1));
    out.post_states[i] = DensityMatrix::checked(kron(ma, bb));
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "measure_b: outcome probabilities sum to " << total;
    throw StateValidationError(os.str());
  }
  return out;
}

double conditional_entropy(const DensityMatrix& rho, const Measurement& m) {
  require(rho.dim() == 4, "conditional_entropy: state must be 4x4");
  const auto outcomes = outcome_vectors(m);
  double total = 0.0;
  for (const OutcomeVector& b : outcomes)
    total += weighted_block_entropy(collapsed_block(rho.matrix(), b));
  return total;
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho,
                                           const MinimizerBudget& budget) {
  require(rho.dim() == 4, "classical_correlation: state must be 4x4");
  require(budget.grid_theta >= 2 && budget.grid_phi >= 1,
          "classical_correlation: grid must be at least 2x1");
  require(budget.starts >= 1 && budget.refine_iterations >= 0,
          "classical_correlation: invalid refinement budget");
  require(budget.shrink > 0.0 && budget.shrink < 1.0,
          "classical_correlation: shrink factor must lie in (0, 1)");

  const ComplexMatrix& mat = rho.matrix();
  auto objective = [&mat](const Measurement& m) {
    const auto outcomes = outcome_vectors(m);
    double total = 0.0;
    for (const OutcomeVector& b : outcomes)
      total += weighted_block_entropy(collapsed_block(mat, b));
    return total;
  };

  // Coarse stage: theta in [0, pi/2] inclusive crossed with the full phi
  // circle. Together with the antipodal symmetry of projector pairs this
  // covers every measurement; refinement below may still wander past the
  // boundaries and is wrapped back.
  const double theta_step = 0.5 * kPi / (budget.grid_theta - 1);
  const double phi_step = 2.0 * kPi / budget.grid_phi;
  std::vector<Candidate> grid;
  grid.reserve(static_cast<std::size_t>(budget.grid_theta) * budget.grid_phi);
  for (int i = 0; i < budget.grid_theta; ++i) {
    const double theta = i * theta_step;
    for (int j = 0; j < budget.grid_phi; ++j) {
      const double phi = j * phi_step;
      const Measurement m{theta, phi};
      grid.push_back(Candidate{objective(m), m});
    }
  }
  std::sort(grid.begin(), grid.end(), better);

  const int starts = std::min<int>(budget.starts, static_cast<int>(grid.size()));
  Candidate best = grid.front();
  for (int s = 0; s < starts; ++s) {
    Candidate current = grid[s];
    double step = std::max(theta_step, phi_step);
    for (int iter = 0; iter < budget.refine_iterations; ++iter) {
      Candidate poll_best{std::numeric_limits<double>::infinity(),
                          Measurement{0.0, 0.0}};
      const double deltas[4][2] = {
          {step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
      for (const auto& d : deltas) {
        const Measurement m =
            canonical(current.m.theta + d[0], current.m.phi + d[1]);
        const Candidate c{objective(m), m};
        if (better(c, poll_best)) poll_best = c;
      }
      if (poll_best.value < current.value) {
        current = poll_best;
      } else {
        step *= budget.shrink;
      }
    }
    if (better(current, best)) best = current;
  }

  const double s_a = entropy_from_eigenvalues(
      hermitian_eigenvalues(partial_trace(mat, 2, 2, Subsystem::A)));
  double value = s_a - best.value;
  if (value < 0.0 && value > -1e-12) value = 0.0;
  return ClassicalCorrelation{value, best.m};
}

CorrelationReport discord_numeric(const DensityMatrix& rho,
                                  const MinimizerBudget& budget) {
  const double info = mutual_information(rho);
  const ClassicalCorrelation classical = classical_correlation(rho, budget);
  return CorrelationReport{info, classical.value, info - classical.value,
                           classical.argmin};
}

double bell_diagonal_mutual_information(const CorrelationVector& d) {
  const auto u = bell_basis_u(d);
  double sum = 0.0;
  for (const double uk : u) sum += xlog2x(uk);
  return 0.25 * sum;
}

double bell_diagonal_classical_correlation(const CorrelationVector& d) {
  const double c = d.max_abs();
  return 0.5 * (xlog2x(1.0 - c) + xlog2x(1.0 + c));
}

double discord_bell_diagonal(const CorrelationVector& d) {
  double value =
      bell_diagonal_mutual_information(d) - bell_diagonal_classical_correlation(d);
  if (value < 0.0 && value > -1e-12) value = 0.0;
  return value;
}

double concurrence_general(const DensityMatrix& rho) {
  require(rho.dim() == 4, "concurrence_general: state must be 4x4");
  const ComplexMatrix yy = kron(pauli_y(), pauli_y());
  const ComplexMatrix flipped = yy * rho.matrix().conjugate() * yy;
  const ComplexMatrix root = hermitian_sqrt(rho.matrix());
  const ComplexMatrix h = root * flipped * root;
  std::vector<double> eigs = hermitian_eigenvalues(h);  // ascending
  std::array<double, 4> chi{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double lambda = eigs[k];
    if (lambda < -1e-9)
      throw StateValidationError(
          "concurrence_general: spin-flip spectrum has a significantly "
          "negative eigenvalue");
    chi[k] = std::sqrt(std::max(lambda, 0.0));
  }
  const double c = chi[3] - chi[2] - chi[1] - chi[0];
  return std::max(0.0, c);
}

double concurrence_xstate(const DensityMatrix& rho) {
  require(rho.dim() == 4, "concurrence_xstate: state must be 4x4");
  const double tol = 1e-9;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool structural = (i == j) || (i + j == 3);
      if (!structural && std::abs(rho(i, j)) > tol)
        throw StateValidationError(
            "concurrence_xstate: state is not X-form within tolerance");
    }
  const double r11 = std::max(0.0, rho(0, 0).real());
  const double r22 = std::max(0.0, rho(1, 1).real());
  const double r33 = std::max(0.0, rho(2, 2).real());
  const double r44 = std::max(0.0, rho(3, 3).real());
  const double inner = std::abs(rho(1, 2)) - std::sqrt(r11 * r44);
  const double outer = std::abs(rho(0, 3)) - std::sqrt(r22 * r33);
  return 2.0 * std::max({0.0, inner, outer});
}

double concurrence_model(double p, double fsq) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("concurrence_model: p must lie in [0, 1]");
  if (!(fsq > 0.0 && fsq <= 1.0))
    throw std::domain_error("concurrence_model: fsq must lie in (0, 1]");
  return std::max(0.0, p * fsq - (1.0 - p) / 2.0);
}

}  // namespace qcorr
