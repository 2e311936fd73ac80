#include "qcorr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace qcorr {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

std::string dim_string(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  require(r > 0, "from_rows: empty row list");
  const std::size_t c = rows.begin()->size();
  require(c > 0, "from_rows: empty first row");
  ComplexMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    require(row.size() == c, "from_rows: ragged rows");
    std::size_t j = 0;
    for (const Complex& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_,
          "matrix addition: shape mismatch " + dim_string(*this) + " vs " +
              dim_string(other));
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_,
          "matrix subtraction: shape mismatch " + dim_string(*this) + " vs " +
              dim_string(other));
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (Complex& v : data_) v *= scalar;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k)
    m.data_[k] = std::conj(data_[k]);
  return m;
}

Complex ComplexMatrix::trace() const {
  require(is_square(), "trace: matrix not square (" + dim_string(*this) + ")");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::hermiticity_defect() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_,
          "max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k)
    worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
  return worst;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const Complex& v : data_) sum += std::norm(v);
  return std::sqrt(sum);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m = a;
  m += b;
  return m;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m = a;
  m -= b;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), "matrix product: inner dimension mismatch");
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  }
  return m;
}

ComplexMatrix operator*(Complex scalar, const ComplexMatrix& m) {
  ComplexMatrix r = m;
  r *= scalar;
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& m, Complex scalar) {
  return scalar * m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex av = a(ia, ja);
      if (av == Complex(0.0, 0.0)) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          m(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
    }
  return m;
}

ComplexMatrix pauli_x() {
  return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

ComplexMatrix pauli_y() {
  return ComplexMatrix::from_rows(
      {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
}

ComplexMatrix pauli_z() {
  return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
}

namespace {

/// Cyclic Jacobi diagonalization of a Hermitian matrix via complex Givens
/// rotations. Input is symmetrized defensively; no Hermiticity tolerance
/// check here (callers enforce their own policy).
Eigensystem jacobi_eigensystem(const ComplexMatrix& input,
                               bool want_vectors) {
  const std::size_t n = input.rows();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

  ComplexMatrix v =
      want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();

  const double scale = std::max(1.0, a.frobenius_norm());
  // Terminate when the off-diagonal Frobenius norm is at round-off level.
  const double off_target_sq = 0.5 * std::pow(1e-15 * scale, 2);
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off_sq = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off_sq += std::norm(a(p, q));
    if (off_sq <= off_target_sq) break;
    if (sweep == max_sweeps - 1)
      throw StateValidationError(
          "hermitian eigensolver failed to converge within sweep budget");

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double beta = std::abs(apq);
        if (beta < 1e-300) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / beta;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * beta);
        const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
        const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app_new = a(p, p).real() - t * beta;
        const double aqq_new = a(q, q).real() + t * beta;

        // Right multiplication by the rotation: mix columns p and q.
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = c * arp - s * std::conj(phase) * arq;
          a(r, q) = s * phase * arp + c * arq;
        }
        // Left multiplication by the adjoint rotation: mix rows p and q.
        for (std::size_t r = 0; r < n; ++r) {
          const Complex apr = a(p, r);
          const Complex aqr = a(q, r);
          a(p, r) = c * apr - s * phase * aqr;
          a(q, r) = s * std::conj(phase) * apr + c * aqr;
        }
        a(p, p) = app_new;
        a(q, q) = aqq_new;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        if (want_vectors) {
          for (std::size_t r = 0; r < n; ++r) {
            const Complex vrp = v(r, p);
            const Complex vrq = v(r, q);
            v(r, p) = c * vrp - s * std::conj(phase) * vrq;
            v(r, q) = s * phase * vrp + c * vrq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&a](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  Eigensystem out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]).real();
  if (want_vectors) {
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

void require_hermitian(const ComplexMatrix& h) {
  if (!h.is_square())
    throw std::invalid_argument("hermitian eigensolver: matrix not square");
  const double defect = h.hermiticity_defect();
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "hermitian eigensolver: input not Hermitian within 1e-10 (defect "
       << defect << ")";
    throw StateValidationError(os.str());
  }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  require_hermitian(h);
  return jacobi_eigensystem(h, /*want_vectors=*/false).values;
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& h) {
  require_hermitian(h);
  return jacobi_eigensystem(h, /*want_vectors=*/true);
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& h, double clip_floor) {
  require_hermitian(h);
  const Eigensystem es = jacobi_eigensystem(h, /*want_vectors=*/true);
  const std::size_t n = h.rows();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = es.values[k];
    if (lambda < -clip_floor) {
      std::ostringstream os;
      os << "hermitian_sqrt: eigenvalue " << lambda << " below -" << clip_floor;
      throw StateValidationError(os.str());
    }
    roots[k] = std::sqrt(std::max(lambda, 0.0));
  }
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        sum += es.vectors(i, k) * roots[k] * std::conj(es.vectors(j, k));
      r(i, j) = sum;
    }
  return r;
}

DensityMatrix DensityMatrix::checked(ComplexMatrix m,
                                     const StateTolerances& tol) {
  if (!m.is_square() || m.rows() == 0)
    throw StateValidationError("density matrix must be square and non-empty");

  const double defect = m.hermiticity_defect();
  if (defect > tol.hermiticity) {
    std::ostringstream os;
    os << "density matrix not Hermitian: defect " << defect << " > "
       << tol.hermiticity;
    throw StateValidationError(os.str());
  }

  const double trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_error > tol.trace) {
    std::ostringstream os;
    os << "density matrix trace off by " << trace_error << " > " << tol.trace;
    throw StateValidationError(os.str());
  }

  const Eigensystem es = jacobi_eigensystem(m, /*want_vectors=*/false);
  const double min_eig = es.values.front();
  if (min_eig < -tol.psd_floor) {
    std::ostringstream os;
    os << "density matrix not positive semidefinite: eigenvalue " << min_eig
       << " < -" << tol.psd_floor;
    throw StateValidationError(os.str());
  }

  return DensityMatrix(std::move(m));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_a,
                            std::size_t dim_b, Subsystem keep) {
  require(rho.is_square(), "partial_trace: matrix not square");
  require(rho.rows() == dim_a * dim_b,
          "partial_trace: dimension mismatch (matrix dim != dA * dB)");
  if (keep == Subsystem::A) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t a1 = 0; a1 < dim_a; ++a1)
      for (std::size_t a2 = 0; a2 < dim_a; ++a2) {
        Complex sum = 0.0;
        for (std::size_t b = 0; b < dim_b; ++b)
          sum += rho(a1 * dim_b + b, a2 * dim_b + b);
        out(a1, a2) = sum;
      }
    return out;
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t b1 = 0; b1 < dim_b; ++b1)
    for (std::size_t b2 = 0; b2 < dim_b; ++b2) {
      Complex sum = 0.0;
      for (std::size_t a = 0; a < dim_a; ++a)
        sum += rho(a * dim_b + b1, a * dim_b + b2);
      out(b1, b2) = sum;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_a,
                            std::size_t dim_b, Subsystem keep) {
  return DensityMatrix::checked(
      partial_trace(rho.matrix(), dim_a, dim_b, keep));
}

double entropy_from_eigenvalues(const std::vector<double>& eigenvalues,
                                double clip_floor) {
  double s = 0.0;
  for (const double lambda : eigenvalues) {
    if (lambda < -clip_floor) {
      std::ostringstream os;
      os << "entropy: eigenvalue " << lambda << " below -" << clip_floor
         << " signals an invalid state";
      throw StateValidationError(os.str());
    }
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  // Round-off can leave a tiny negative total; true entropies are >= 0.
  if (s < 0.0 && s > -1e-12) s = 0.0;
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_from_eigenvalues(hermitian_eigenvalues(rho.matrix()));
}

}  // namespace qcorr
