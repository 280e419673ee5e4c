#pragma once

// Dense complex kernel shared by every other module: Kronecker products,
// partial traces, Hermitian eigensystems and spectral functions.
//
// Tensor index convention: for a product space L ⊗ R the composite index of
// (l, r) is l * dim(R) + r, so kron(a, b) has entry ((i,k),(j,l)) equal to
// a(i,j) * b(k,l).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include "entlab/error.hpp"

namespace entlab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Global numerical thresholds. Values are tied together: clipping sits two
/// orders below the PSD tolerance, which sits two orders below the hermiticity
/// bound.
namespace tol {
inline constexpr double kSupport = 1e-12;     // eigenvalues below are treated as 0
inline constexpr double kPsd = 1e-10;         // most negative eigenvalue accepted
inline constexpr double kHermitian = 1e-8;    // max |h - h^†| accepted
inline constexpr double kTrace = 1e-10;       // |tr ρ - 1| accepted for states
inline constexpr int kMaxTensorDim = 4096;
}  // namespace tol

inline double max_abs(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double trace_real(const CMat& m) { return m.trace().real(); }

inline void require_finite(const CMat& m, const char* what = "matrix") {
  if (!m.allFinite()) fail(ErrorCode::Domain, std::string(what) + " has non-finite entries");
}

inline void require_square(const CMat& m, const char* what = "matrix") {
  if (m.rows() != m.cols()) {
    fail(ErrorCode::Shape, std::string(what) + " must be square, got " +
                               std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

/// Builds a matrix from row-major entries; rejects NaN/Inf.
inline CMat make_matrix(int rows, int cols, std::span<const Complex> entries) {
  if (rows <= 0 || cols <= 0) fail(ErrorCode::Shape, "matrix dimensions must be positive");
  if (entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    fail(ErrorCode::Shape, "entry count does not match rows*cols");
  }
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = entries[static_cast<std::size_t>(i) * cols + j];
  require_finite(m);
  return m;
}

inline CMat kron(const CMat& a, const CMat& b, int max_dim = tol::kMaxTensorDim) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > max_dim || cols > max_dim) {
    fail(ErrorCode::Size, "kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                              " exceeds maximum dimension " + std::to_string(max_dim));
  }
  CMat out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

enum class Side { Left, Right };

/// Traces out the `traced` factor of a square operator on L ⊗ R.
inline CMat partial_trace(const CMat& m, int dim_left, int dim_right, Side traced) {
  require_square(m, "partial_trace input");
  if (dim_left <= 0 || dim_right <= 0 ||
      m.rows() != static_cast<Eigen::Index>(dim_left) * dim_right) {
    fail(ErrorCode::Shape, "partial_trace: " + std::to_string(m.rows()) + " is not " +
                               std::to_string(dim_left) + "*" + std::to_string(dim_right));
  }
  if (traced == Side::Left) {
    CMat out = CMat::Zero(dim_right, dim_right);
    for (int k = 0; k < dim_left; ++k) out += m.block(k * dim_right, k * dim_right, dim_right, dim_right);
    return out;
  }
  CMat out(dim_left, dim_left);
  for (int i = 0; i < dim_left; ++i)
    for (int j = 0; j < dim_left; ++j)
      out(i, j) = m.block(i * dim_right, j * dim_right, dim_right, dim_right).trace();
  return out;
}

inline double hermiticity_deviation(const CMat& h) { return max_abs(h - h.adjoint()); }

inline CMat hermitize(const CMat& h) { return (h + h.adjoint()) * 0.5; }

/// J B^† J with J the entrywise conjugation, i.e. the plain transpose.
inline CMat transpose_tilde(const CMat& b) {
  require_square(b, "transpose_tilde input");
  return b.transpose();
}

struct EigenSystem {
  RVec values;   // descending
  CMat vectors;  // columns, unitary
};

/// Eigensystem of a Hermitian matrix, eigenvalues descending. Each eigenvector
/// is rotated so that its first largest-modulus component is real and
/// nonnegative.
inline EigenSystem herm_eig(const CMat& h) {
  require_square(h, "herm_eig input");
  require_finite(h, "herm_eig input");
  const double dev = hermiticity_deviation(h);
  if (dev > tol::kHermitian) {
    fail(ErrorCode::Domain, "herm_eig: hermiticity deviation " + std::to_string(dev));
  }
  const Eigen::Index n = h.rows();
  Eigen::SelfAdjointEigenSolver<CMat> solver(hermitize(h));
  if (solver.info() != Eigen::Success) fail(ErrorCode::Consistency, "herm_eig did not converge");

  EigenSystem es{RVec(n), CMat(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    es.values(k) = solver.eigenvalues()(src);
    CVec v = solver.eigenvectors().col(src);
    double best = -1.0;
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      // Slack keeps the pivot stable when two components tie up to rounding.
      if (std::abs(v(i)) > best + 1e-12) {
        best = std::abs(v(i));
        pivot = i;
      }
    }
    if (best > 0.0) v *= std::conj(v(pivot)) / best;
    es.vectors.col(k) = v;
  }
  return es;
}

/// Eigenvalues only, descending.
inline RVec herm_eigenvalues(const CMat& h) {
  require_square(h, "herm_eigenvalues input");
  if (hermiticity_deviation(h) > tol::kHermitian) {
    fail(ErrorCode::Domain, "herm_eigenvalues: input is not Hermitian");
  }
  if (h.rows() == 1) return RVec::Constant(1, h(0, 0).real());
  if (h.rows() == 2) {
    const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double half_gap = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const Complex off = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
    const double radius = std::hypot(half_gap, std::abs(off));
    RVec out(2);
    out << mean + radius, mean - radius;
    return out;
  }
  RVec asc = Eigen::SelfAdjointEigenSolver<CMat>(hermitize(h), Eigen::EigenvaluesOnly).eigenvalues();
  return asc.reverse();
}

enum class SpectralFn { Ln, Sqrt };

/// f(h) for PSD h. Eigenvalues under the support cutoff count as 0 for both
/// functions; for Ln this gives 0 ln 0 = 0 in traces against operators on the
/// same support.
inline CMat spectral_fn(const CMat& h, SpectralFn f) {
  const EigenSystem es = herm_eig(h);
  RVec mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double lambda = es.values(i);
    if (lambda < -tol::kPsd) {
      fail(ErrorCode::NotPsd, "spectral_fn: eigenvalue " + std::to_string(lambda) + " below PSD tolerance");
    }
    if (lambda < tol::kSupport) {
      mapped(i) = 0.0;
    } else {
      mapped(i) = f == SpectralFn::Sqrt ? std::sqrt(lambda) : std::log(lambda);
    }
  }
  return es.vectors * mapped.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

/// -Σ λ ln λ over the clipped spectrum of a PSD matrix (nats).
inline double entropy_of_matrix(const CMat& density) {
  const RVec lambda = herm_eigenvalues(density);
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -tol::kPsd) fail(ErrorCode::NotPsd, "entropy: matrix is not PSD");
    if (lambda(i) > tol::kSupport) s -= lambda(i) * std::log(lambda(i));
  }
  return s;
}

inline bool is_psd(const CMat& m, double tolerance = tol::kPsd) {
  if (m.rows() != m.cols() || hermiticity_deviation(m) > tol::kHermitian) return false;
  const RVec lambda = herm_eigenvalues(m);
  return lambda.size() == 0 || lambda(lambda.size() - 1) >= -tolerance;
}

}  // namespace entlab
