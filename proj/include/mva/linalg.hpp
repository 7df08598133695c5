#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "mva/types.hpp"

namespace mva {

/// Symmetric eigendecomposition with deterministic ordering and signs:
/// eigenvalues sorted non-increasing, eigenvector column k paired with
/// eigenvalue k, and each column flipped so its largest-magnitude entry is
/// non-negative.
template <typename Scalar>
struct SymEig {
  Vector<Scalar> eigenvalues;
  Matrix<Scalar> eigenvectors;
  bool repeated = false;  // some adjacent eigenvalues are numerically equal
};

/// Thin SVD A = Q diag(sigma) P^T with sigma sorted non-increasing. The sign
/// convention of SymEig is applied to the columns of Q; P columns are flipped
/// to match so the product is unchanged.
template <typename Scalar>
struct Svd {
  Matrix<Scalar> q;
  Vector<Scalar> singular_values;
  Matrix<Scalar> p;
  Index rank = 0;  // number of sigma > 1e-12 * sigma_max
};

/// Flip column signs of `m` so the largest-magnitude entry of each column is
/// non-negative (first such entry in column order decides on ties). If
/// `mirror` is given, the same flips are applied to its columns.
template <typename Scalar>
inline void canonicalize_column_signs(Matrix<Scalar>& m, Matrix<Scalar>* mirror = nullptr) {
  for (Index j = 0; j < m.cols(); ++j) {
    Index at = 0;
    m.col(j).cwiseAbs().maxCoeff(&at);
    if (m(at, j) < Scalar(0)) {
      m.col(j) = -m.col(j);
      if (mirror != nullptr) mirror->col(j) = -mirror->col(j);
    }
  }
}

/// Frobenius norm of the off-diagonal part of a square matrix.
template <typename Derived>
inline typename Derived::Scalar offdiagonal_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> off = a;
  off.diagonal().setZero();
  return off.norm();
}

/// Eigendecomposition of a symmetric matrix. The input is symmetrized as
/// (A + A^T)/2 before factorization. Throws std::invalid_argument on
/// non-finite entries.
template <typename Derived>
inline SymEig<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (!a.allFinite()) throw std::invalid_argument("sym_eig: non-finite entry in input");
  Matrix<Scalar> sym = (a + a.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_eig: eigendecomposition failed to converge");

  const Index n = sym.rows();
  SymEig<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  canonicalize_column_signs(out.eigenvectors);

  const Scalar scale = std::max(std::abs(out.eigenvalues(0)), Scalar(1e-300));
  for (Index i = 0; i + 1 < n; ++i) {
    if (std::abs(out.eigenvalues(i) - out.eigenvalues(i + 1)) <= Scalar(1e-9) * scale) {
      out.repeated = true;
      break;
    }
  }
  return out;
}

/// Thin singular value decomposition of a general p x q matrix.
template <typename Derived>
inline Svd<typename Derived::Scalar> thin_svd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (!a.allFinite()) throw std::invalid_argument("thin_svd: non-finite entry in input");
  Eigen::JacobiSVD<Matrix<Scalar>> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);

  Svd<Scalar> out;
  out.q = solver.matrixU();
  out.p = solver.matrixV();
  out.singular_values = solver.singularValues();
  canonicalize_column_signs(out.q, &out.p);

  const Scalar smax = out.singular_values.size() > 0 ? out.singular_values(0) : Scalar(0);
  out.rank = 0;
  for (Index i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values(i) > Scalar(1e-12) * smax) ++out.rank;
  if (smax == Scalar(0)) out.rank = 0;
  return out;
}

/// Symmetric PSD inverse square root: V diag((lambda_k + jitter)^{-1/2}) V^T.
/// Round-off negative eigenvalues are treated as zero. Throws
/// std::domain_error when jitter is zero and the matrix is numerically
/// singular.
template <typename Derived>
inline Matrix<typename Derived::Scalar> inv_sqrt_psd(const Eigen::MatrixBase<Derived>& a,
                                                     typename Derived::Scalar jitter) {
  using Scalar = typename Derived::Scalar;
  SymEig<Scalar> se = sym_eig(a);
  Vector<Scalar> lam = se.eigenvalues.cwiseMax(Scalar(0));
  const Scalar lmax = lam.size() > 0 ? lam(0) : Scalar(0);
  if (jitter == Scalar(0) && (lam.size() == 0 || lam(lam.size() - 1) <= Scalar(1e-12) * lmax))
    throw std::domain_error("inv_sqrt_psd: singular matrix, supply jitter");
  Vector<Scalar> d = (lam.array() + jitter).rsqrt();
  return se.eigenvectors * d.asDiagonal() * se.eigenvectors.transpose();
}

/// Symmetric PSD square root: V diag((lambda_k + jitter)^{1/2}) V^T.
template <typename Derived>
inline Matrix<typename Derived::Scalar> sqrt_psd(const Eigen::MatrixBase<Derived>& a,
                                                 typename Derived::Scalar jitter = 0) {
  using Scalar = typename Derived::Scalar;
  SymEig<Scalar> se = sym_eig(a);
  Vector<Scalar> d = (se.eigenvalues.cwiseMax(Scalar(0)).array() + jitter).sqrt();
  return se.eigenvectors * d.asDiagonal() * se.eigenvectors.transpose();
}

/// (C + gamma I)^{-1} for symmetric PSD C, computed through the
/// eigendecomposition so the result is symmetric to round-off. Throws
/// std::domain_error when gamma = 0 and C is numerically singular.
template <typename Derived>
inline Matrix<typename Derived::Scalar> regularized_inverse(const Eigen::MatrixBase<Derived>& c,
                                                            typename Derived::Scalar gamma) {
  using Scalar = typename Derived::Scalar;
  if (gamma < Scalar(0)) throw std::invalid_argument("regularized_inverse: negative gamma");
  SymEig<Scalar> se = sym_eig(c);
  Vector<Scalar> shifted = se.eigenvalues.array() + gamma;
  const Scalar smax = shifted.size() > 0 ? std::abs(shifted(0)) : Scalar(0);
  for (Index i = 0; i < shifted.size(); ++i)
    if (shifted(i) <= Scalar(1e-12) * smax)
      throw std::domain_error("regularized_inverse: singular matrix at gamma=0");
  return se.eigenvectors * shifted.cwiseInverse().asDiagonal() * se.eigenvectors.transpose();
}

/// |R_jj| from the (unpivoted) Householder QR of a square matrix. Column
/// order is preserved, so the values follow the caller's feature order.
template <typename Derived>
inline Vector<typename Derived::Scalar> qr_diagonal_abs(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (!a.allFinite()) throw std::invalid_argument("qr_diagonal_abs: non-finite entry in input");
  Eigen::HouseholderQR<Matrix<Scalar>> qr(a);
  return qr.matrixQR().diagonal().cwiseAbs();
}

}  // namespace mva
