#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcorr {

using Complex = std::complex<double>;

/// Thrown when a quantum-state invariant (Hermiticity, unit trace,
/// positivity) is violated beyond tolerance.
class StateValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major complex matrix. All dimensions in this project are small
/// (at most a few hundred), so no sparse or blocked machinery is used.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  /// Builds a matrix from nested brace lists; all rows must share one length.
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  /// max_ij |M(i,j) - conj(M(j,i))|; zero for exactly Hermitian matrices.
  double hermiticity_defect() const;
  /// max_ij |M(i,j) - other(i,j)|.
  double max_abs_diff(const ComplexMatrix& other) const;
  double frobenius_norm() const;

  const std::vector<Complex>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, const ComplexMatrix& m);
ComplexMatrix operator*(const ComplexMatrix& m, Complex scalar);

/// Kronecker (tensor) product; dimensions multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Tolerances for density-matrix validation. The defaults suit analytically
/// constructed states; numerically integrated states may need looser floors.
struct StateTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double psd_floor = 1e-9;  // smallest eigenvalue must be >= -psd_floor
};

/// A validated quantum state: square, Hermitian, unit-trace, positive
/// semidefinite (all within StateTolerances). Construction only through
/// checked(), so every instance carries its invariants.
class DensityMatrix {
 public:
  /// Validates and wraps; throws StateValidationError on violation.
  static DensityMatrix checked(ComplexMatrix m,
                               const StateTolerances& tol = StateTolerances{});

  const ComplexMatrix& matrix() const { return mat_; }
  std::size_t dim() const { return mat_.rows(); }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return mat_(i, j);
  }

 private:
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

enum class Subsystem { A, B };

/// Reduced state of one factor of a bipartite system with composite index
/// i = a * dim_b + b (subsystem A major). Trace-preserving.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_a,
                            std::size_t dim_b, Subsystem keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_a,
                            std::size_t dim_b, Subsystem keep);

struct Eigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Eigenvalues of a Hermitian matrix, ascending, with multiplicity.
/// Input must be Hermitian within 1e-10 (absolute) or the call throws.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);
Eigensystem hermitian_eigensystem(const ComplexMatrix& h);

/// Principal square root of a positive-semidefinite Hermitian matrix.
/// Eigenvalues in [-clip_floor, 0) are clipped to 0; below that throws.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& h, double clip_floor = 1e-9);

/// -sum_i lambda_i log2(lambda_i) with 0 log 0 = 0. Eigenvalues in
/// [-1e-9, 0) are clipped to 0; an eigenvalue below -1e-9 throws.
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy in bits from a spectrum; shared clipping rules as above.
double entropy_from_eigenvalues(const std::vector<double>& eigenvalues,
                                double clip_floor = 1e-9);

}  // namespace qcorr
