#pragma once

#include <vector>

#include "mva/dataset.hpp"
#include "mva/regularizers.hpp"
#include "mva/types.hpp"
#include "mva/variant.hpp"

namespace mva {

/// Covariance-level view of a (dataset, variant) pair: output aliasing and
/// weighting are applied once so every solver works from the same matrices.
struct MvaProblem {
  MvaVariant variant;
  Index n = 0;  // input dimension
  Index m = 0;  // effective output dimension (n for PCA)
  Matrixd cxx, cyy, cxy;
  Matrixd omega, omega_sqrt, omega_inv_sqrt;
  double output_energy = 0.0;   // Tr{Omega C_YY}, the constant objective term
  double cxx_eigmax = 0.0;      // cached for proximal step sizes
};

MvaProblem make_problem(const Dataset& d, const MvaVariant& variant);

struct FitFlags {
  bool rank_deficient_wstep = false;
  bool repeated_eigenvalues = false;
  bool zero_solution = false;
  bool zero_eigenvalues = false;  // requested k exceeds the spectrum's rank
  bool inner_not_converged = false;
};

struct TraceRecord {
  double objective = 0.0;
  double u_rel_change = 0.0;
  double v_change = 0.0;
  double sparsity = 0.0;
};

/// Fitted projections: U maps inputs to extracted features, W maps outputs,
/// V is the orthonormal factor W = Omega^{-1/2} V, lambda the associated
/// spectrum (non-increasing).
struct ProjectionModel {
  Matrixd u, w, v;
  Vectord lambda;
  Index k = 0;
  double gamma = 0.0;
  Penalty penalty;
  std::vector<TraceRecord> trace;  // empty for closed-form fits
  int iterations = 0;
  bool converged = true;
  FitFlags flags;
};

/// Symmetric m x m matrix whose leading eigenvectors solve the reduced
/// problem: Omega^{1/2} C_XY^T (C_XX + gamma I)^{-1} C_XY Omega^{1/2}.
Matrixd reduced_coupling(const MvaProblem& p, double gamma);

/// Non-iterative solution: V from the top-k eigenpairs of the reduced
/// coupling, U from the ridge response to V, W = Omega^{-1/2} V.
ProjectionModel fit_closed_form(const MvaProblem& p, Index k, double gamma);
ProjectionModel fit_closed_form(const Dataset& d, const MvaVariant& variant, Index k,
                                double gamma);

/// Full objective value at (U, W):
/// Tr{Y^T Omega Y} - 2 Tr{U^T C_XY Omega W} + Tr{U^T C_XX U W^T Omega W}
/// + gamma R(U).
double objective(const MvaProblem& p, const Matrixd& u, const Matrixd& w, double gamma,
                 const Penalty& penalty);
double objective(const Dataset& d, const MvaVariant& variant, const Matrixd& u,
                 const Matrixd& w, double gamma, const Penalty& penalty);

/// Trace form Tr{V^T Omega^{1/2} C_XY^T (C_XX + gamma I)^{-1} C_XY
/// Omega^{1/2} V}; this is the maximization score reported for CCA.
double trace_objective(const MvaProblem& p, const Matrixd& v, double gamma);

/// ||offdiag(U^T C_XX U)||_F. Zero exactly when the extracted features are
/// uncorrelated; shared with the CEF metric.
double uncorrelation_residual(const Matrixd& u, const Matrixd& cxx);

}  // namespace mva
