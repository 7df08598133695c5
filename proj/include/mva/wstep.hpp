#pragma once

#include "mva/core.hpp"
#include "mva/dataset.hpp"
#include "mva/types.hpp"
#include "mva/variant.hpp"

namespace mva {

/// The two interchangeable solutions of the orthonormal-output step. Both
/// consume the same precomputed coupling G = Omega^{1/2} C_XY^T U and return
/// V with V^T V = I.
enum class WStepStrategy { Procrustes, Eigen };

struct WStepResult {
  Matrixd v;
  Vectord lambda;             // eigenvalue strategy only: spectrum of G G^T
  bool rank_deficient = false;  // rank(G) < k; the polar solution is then non-unique
  bool repeated = false;        // eigenvalue strategy hit a (near-)repeated spectrum
};

/// Polar factor Q P^T of G: the trace-optimal orthonormal V.
WStepResult w_step_procrustes(const Matrixd& g);

/// Top-k eigenvectors of G G^T together with their eigenvalues; equals the
/// left singular factor of G with lambda = sigma^2.
WStepResult w_step_eigen(const Matrixd& g);

/// P^T from the SVD of G, the rotation carrying the eigenvalue solution onto
/// the polar one: v_p = v_eig * P^T. Throws std::runtime_error with the
/// residual when the two inputs do not satisfy the identity within 1e-8
/// after sign alignment.
Matrixd rotation_between(const Matrixd& v_p, const Matrixd& v_eig, const Matrixd& g);

struct FeatureCorrelation {
  Matrixd gram;              // U_p^T C_XX U_p
  Matrixd rotated_spectrum;  // P Sigma P^T from the SVD of Omega^{1/2} C_XY^T U_p
  double residual = 0.0;     // ||gram - rotated_spectrum||_F
};

/// Feature autocorrelation reached by an unregularized exact input step from
/// the polar-factor solution V_p, together with its P Sigma P^T form. The
/// two agree at a fixed point of the polar iteration; `residual` reports the
/// gap. Throws when C_XX is singular.
FeatureCorrelation procrustes_feature_correlation(const Dataset& d, const MvaVariant& variant,
                                                  const Matrixd& v_p);
FeatureCorrelation procrustes_feature_correlation(const MvaProblem& p, const Matrixd& v_p);

}  // namespace mva
