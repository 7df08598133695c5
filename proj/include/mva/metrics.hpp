#pragma once

#include <string>

#include "mva/types.hpp"

namespace mva {

/// One experiment outcome. `method` is ClosedForm, Procrustes or Eigen,
/// optionally suffixed with the initialization for sparsity sweeps
/// (e.g. Procrustes-random).
struct MetricRow {
  std::string method;
  std::string variant;
  int k = 0;
  long seed = 0;
  double gamma = 0.0;
  double sr = 0.0;
  double loss = 0.0;
  double tev = 0.0;
  double cef = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Cumulative explained variance per feature count: partial sums of |R_jj|
/// from one unpivoted QR of the k-feature Gram matrix U^T C_XX U. Feature
/// order is the model's column order.
Vectord tev(const Matrixd& u, const Matrixd& cxx, Index k);

/// ||U^T C_XX U - diag(U^T C_XX U)||_F; zero exactly for uncorrelated
/// features.
double cef(const Matrixd& u, const Matrixd& cxx);

}  // namespace mva
