// Copyright 2026 The seqdisc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqdisc {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Numerical tolerances shared across the library.
namespace tol {
inline constexpr double kNorm = 1e-12;          // state normalization / unit trace
inline constexpr double kHermitian = 1e-12;     // entrywise |M - M†|
inline constexpr double kPsdFloor = -1e-10;     // smallest admissible eigenvalue
inline constexpr double kUnitary = 1e-10;       // entrywise |U†U - I|
inline constexpr double kOrthonormal = 1e-10;   // Gram deviation of supplied columns
inline constexpr double kGsResidual = 1e-8;     // Gram-Schmidt candidate cutoff
inline constexpr double kSpectrumFloor = 1e-12; // eigenvalues below count as 0 in entropies
inline constexpr double kProbFloor = 1e-12;     // outcome probabilities below are exactly 0
}  // namespace tol

namespace detail {

inline bool is_hermitian(const Mat& m, double eps) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= eps;
}

// Eigenvalues of a Hermitian matrix, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian eigendecomposition failed to converge");
  }
  return solver.eigenvalues();
}

// -sum lambda log2 lambda with eigenvalues below kSpectrumFloor treated as 0.
inline double entropy_of_spectrum(const Eigen::VectorXd& lambda) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double x = lambda(i);
    if (x > tol::kSpectrumFloor) s -= x * std::log2(x);
  }
  return s;
}

inline double entropy_raw(const Mat& rho) {
  return entropy_of_spectrum(hermitian_eigenvalues(rho));
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline std::vector<int> concat_factors(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline int factor_product(const std::vector<int>& factors) {
  return std::accumulate(factors.begin(), factors.end(), 1, std::multiplies<int>());
}

// Decomposes a flat index into mixed-radix digits for the given factor dims
// (leftmost factor is the most significant digit).
inline void decompose_index(int index, const std::vector<int>& dims, std::vector<int>& digits) {
  digits.resize(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
}

// Partial trace on a raw matrix; keep lists factor indices to retain, ascending.
inline Mat ptrace_raw(const Mat& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  int kept_dim = 1;
  for (int k : keep) kept_dim *= dims[k];
  std::vector<bool> is_kept(n, false);
  for (int k : keep) is_kept[k] = true;

  Mat out = Mat::Zero(kept_dim, kept_dim);
  std::vector<int> row_digits, col_digits;
  const int dim = static_cast<int>(rho.rows());
  for (int row = 0; row < dim; ++row) {
    decompose_index(row, dims, row_digits);
    for (int col = 0; col < dim; ++col) {
      decompose_index(col, dims, col_digits);
      bool diagonal_on_traced = true;
      for (int k = 0; k < n; ++k) {
        if (!is_kept[k] && row_digits[k] != col_digits[k]) {
          diagonal_on_traced = false;
          break;
        }
      }
      if (!diagonal_on_traced) continue;
      int out_row = 0, out_col = 0;
      for (int k : keep) {
        out_row = out_row * dims[k] + row_digits[k];
        out_col = out_col * dims[k] + col_digits[k];
      }
      out(out_row, out_col) += rho(row, col);
    }
  }
  return out;
}

// Golden-section minimization on [lo, hi]; deterministic, fixed iteration count.
template <class F>
std::pair<double, double> golden_section_min(F&& f, double lo, double hi, int iters = 48) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace detail

/// Normalized pure state over an ordered tensor factorization.
/// Factor index 0 is the leftmost (most significant) subsystem.
class StateVector {
 public:
  explicit StateVector(Vec amplitudes, std::vector<int> factors = {})
      : amps_(std::move(amplitudes)), factors_(std::move(factors)) {
    if (amps_.size() == 0) throw std::invalid_argument("StateVector: empty amplitude list");
    if (factors_.empty()) factors_ = {static_cast<int>(amps_.size())};
    if (detail::factor_product(factors_) != static_cast<int>(amps_.size())) {
      throw std::invalid_argument("StateVector: factor product does not match dimension");
    }
    const double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > tol::kNorm) {
      throw std::invalid_argument("StateVector: not normalized, |<v|v>-1| = " +
                                  std::to_string(std::abs(norm2 - 1.0)));
    }
  }

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vec& amplitudes() const { return amps_; }
  const std::vector<int>& factors() const { return factors_; }
  Complex operator[](int i) const { return amps_(i); }

  /// <this|other>
  Complex inner(const StateVector& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("inner: dimension mismatch");
    return amps_.dot(other.amps_);  // Eigen's dot conjugates the left argument
  }

 private:
  Vec amps_;
  std::vector<int> factors_;
};

/// Hermitian, positive-semidefinite, unit-trace operator over a declared
/// tensor factorization.
class DensityOperator {
 public:
  DensityOperator(Mat matrix, std::vector<int> factors)
      : mat_(std::move(matrix)), factors_(std::move(factors)) {
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("DensityOperator: not square");
    if (detail::factor_product(factors_) != static_cast<int>(mat_.rows())) {
      throw std::invalid_argument("DensityOperator: factor product does not match dimension");
    }
    if (!detail::is_hermitian(mat_, tol::kHermitian)) {
      throw std::invalid_argument("DensityOperator: not Hermitian");
    }
    if (std::abs(mat_.trace().real() - 1.0) > tol::kNorm ||
        std::abs(mat_.trace().imag()) > tol::kNorm) {
      throw std::invalid_argument("DensityOperator: trace != 1");
    }
    const Eigen::VectorXd lambda = detail::hermitian_eigenvalues(mat_);
    if (lambda.minCoeff() < tol::kPsdFloor) {
      throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                  std::to_string(lambda.minCoeff()));
    }
  }

  static DensityOperator from_pure(const StateVector& psi) {
    const Vec& v = psi.amplitudes();
    return DensityOperator(v * v.adjoint(), psi.factors());
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& matrix() const { return mat_; }
  const std::vector<int>& factors() const { return factors_; }

  /// Eigenvalues in ascending order.
  Eigen::VectorXd eigenvalues() const { return detail::hermitian_eigenvalues(mat_); }

 private:
  Mat mat_;
  std::vector<int> factors_;
};

/// Unitary over a declared tensor factorization; U†U = I within tol::kUnitary.
class UnitaryOperator {
 public:
  UnitaryOperator(Mat matrix, std::vector<int> factors)
      : mat_(std::move(matrix)), factors_(std::move(factors)) {
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("UnitaryOperator: not square");
    if (detail::factor_product(factors_) != static_cast<int>(mat_.rows())) {
      throw std::invalid_argument("UnitaryOperator: factor product does not match dimension");
    }
    const Mat gram = mat_.adjoint() * mat_;
    const double defect =
        (gram - Mat::Identity(mat_.rows(), mat_.cols())).cwiseAbs().maxCoeff();
    if (defect > tol::kUnitary) {
      throw std::invalid_argument("UnitaryOperator: unitarity defect " + std::to_string(defect));
    }
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& matrix() const { return mat_; }
  const std::vector<int>& factors() const { return factors_; }

  double unitarity_defect() const {
    return (mat_.adjoint() * mat_ - Mat::Identity(mat_.rows(), mat_.cols()))
        .cwiseAbs()
        .maxCoeff();
  }

  StateVector apply(const StateVector& psi) const {
    if (psi.dim() != dim()) throw std::invalid_argument("apply: dimension mismatch");
    return StateVector(mat_ * psi.amplitudes(), psi.factors());
  }

  DensityOperator conjugate(const DensityOperator& rho) const {
    if (rho.dim() != dim()) throw std::invalid_argument("conjugate: dimension mismatch");
    return DensityOperator(mat_ * rho.matrix() * mat_.adjoint(), rho.factors());
  }

 private:
  Mat mat_;
  std::vector<int> factors_;
};

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
  return StateVector(detail::kron(a.amplitudes(), b.amplitudes()),
                     detail::concat_factors(a.factors(), b.factors()));
}

inline DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(detail::kron(a.matrix(), b.matrix()),
                         detail::concat_factors(a.factors(), b.factors()));
}

/// Reduced state on the kept factors (ascending factor indices).
inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  const auto& dims = rho.factors();
  const int n = static_cast<int>(dims.size());
  if (keep.empty()) throw std::invalid_argument("partial_trace: nothing kept");
  std::vector<int> sorted(keep);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("partial_trace: duplicate subsystem index");
  }
  for (int k : sorted) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: invalid subsystem index");
  }
  std::vector<int> kept_dims;
  for (int k : sorted) kept_dims.push_back(dims[k]);
  return DensityOperator(detail::ptrace_raw(rho.matrix(), dims, sorted), kept_dims);
}

inline DensityOperator partial_trace(const DensityOperator& rho, int keep) {
  return partial_trace(rho, std::vector<int>{keep});
}

/// Von Neumann entropy in bits.
inline double von_neumann_entropy(const DensityOperator& rho) {
  return detail::entropy_of_spectrum(rho.eigenvalues());
}

/// Binary Shannon entropy in bits, with 0 log 0 = 0.
inline double binary_entropy_bits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// H(x) = h((1 + sqrt(1-x))/2): entropy of a qubit spectrum with tangle x.
/// Monotone increasing on [0,1]; inputs within 1e-12 of the boundary are clamped.
inline double tangle_entropy_H(double x) {
  if (x < -tol::kNorm || x > 1.0 + tol::kNorm) {
    throw std::invalid_argument("tangle_entropy_H: argument outside [0,1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  return binary_entropy_bits(0.5 * (1.0 + std::sqrt(1.0 - x)));
}

/// Sum of |negative eigenvalues| of the partial transpose over `subsystem`.
/// Zero iff separable for 2x2 and 2x3 factorizations (PPT is conclusive there).
inline double partial_transpose_negativity(const DensityOperator& rho, int subsystem) {
  const auto& dims = rho.factors();
  if (dims.size() != 2) throw std::invalid_argument("negativity: bipartite state required");
  const int da = dims[0], db = dims[1];
  const bool supported = (da == 2 && (db == 2 || db == 3));
  if (!supported) throw std::invalid_argument("negativity: unsupported factor dimensions");
  if (subsystem != 0 && subsystem != 1) {
    throw std::invalid_argument("negativity: invalid subsystem index");
  }

  Mat pt(rho.dim(), rho.dim());
  for (int i = 0; i < da; ++i)
    for (int a = 0; a < db; ++a)
      for (int j = 0; j < da; ++j)
        for (int b = 0; b < db; ++b) {
          // transpose the chosen factor's indices
          const int row = (subsystem == 0 ? j : i) * db + (subsystem == 1 ? b : a);
          const int col = (subsystem == 0 ? i : j) * db + (subsystem == 1 ? a : b);
          pt(row, col) = rho.matrix()(i * db + a, j * db + b);
        }

  const Eigen::VectorXd lambda = detail::hermitian_eigenvalues(pt);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < 0.0) neg -= lambda(i);
  }
  return neg;
}

namespace detail {

// Modified Gram-Schmidt completion seeded with standard basis vectors.
// Candidates whose residual norm falls below kGsResidual are discarded, so the
// completion is deterministic and basis-stable.
inline Mat complete_isometry_raw(const std::vector<Vec>& columns, int dim) {
  if (static_cast<int>(columns.size()) > dim) {
    throw std::invalid_argument("complete_isometry: more columns than dimensions");
  }
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].size() != dim) {
      throw std::invalid_argument("complete_isometry: column dimension mismatch");
    }
    for (size_t j = 0; j <= i; ++j) {
      const Complex g = columns[j].dot(columns[i]);
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - expected) > tol::kOrthonormal) {
        throw std::invalid_argument("complete_isometry: supplied columns not orthonormal");
      }
    }
  }

  std::vector<Vec> basis(columns);
  for (int candidate = 0; candidate < dim && static_cast<int>(basis.size()) < dim; ++candidate) {
    Vec v = Vec::Zero(dim);
    v(candidate) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
      for (const Vec& b : basis) v -= b * b.dot(v);
    }
    const double norm = v.norm();
    if (norm >= tol::kGsResidual) basis.push_back(v / norm);
  }
  if (static_cast<int>(basis.size()) != dim) {
    throw std::runtime_error("complete_isometry: completion failed");
  }

  Mat u(dim, dim);
  for (int j = 0; j < dim; ++j) u.col(j) = basis[j];
  return u;
}

}  // namespace detail

/// Completes orthonormal columns to a full unitary; the first columns of the
/// result equal the supplied columns in order.
inline UnitaryOperator complete_isometry(const std::vector<StateVector>& columns, int dim) {
  std::vector<Vec> raw;
  raw.reserve(columns.size());
  for (const auto& c : columns) raw.push_back(c.amplitudes());
  return UnitaryOperator(detail::complete_isometry_raw(raw, dim), {dim});
}

}  // namespace seqdisc
