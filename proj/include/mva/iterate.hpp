#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mva/core.hpp"
#include "mva/dataset.hpp"
#include "mva/regularizers.hpp"
#include "mva/types.hpp"
#include "mva/variant.hpp"
#include "mva/wstep.hpp"

namespace mva {

/// How V is initialized. RandomUniform draws entries i.i.d. uniform on
/// [0,1) (used as-is, not orthogonalized); OrthogonalOfOmegaCovariance takes
/// the top-k eigenvectors of the output covariance (input covariance when the
/// output is aliased); Ideal starts from the unregularized closed-form
/// solution.
struct InitScheme {
  enum class Kind { RandomUniform, OrthogonalOfOmegaCovariance, Ideal };

  Kind kind = Kind::RandomUniform;
  std::uint64_t seed = 0;

  static InitScheme random_uniform(std::uint64_t seed) {
    return {Kind::RandomUniform, seed};
  }
  static InitScheme orthogonal() { return {Kind::OrthogonalOfOmegaCovariance, 0}; }
  static InitScheme ideal() { return {Kind::Ideal, 0}; }
};

/// Thrown when the coupled iteration produces a non-finite objective. The
/// trace up to the failure is attached.
struct IterationDivergence : std::runtime_error {
  explicit IterationDivergence(std::vector<TraceRecord> t)
      : std::runtime_error("fit_iterative: objective diverged to a non-finite value"),
        trace(std::move(t)) {}
  std::vector<TraceRecord> trace;
};

Matrixd initial_v(const MvaProblem& p, Index k, const InitScheme& init);

/// Alternating minimization of the shared objective: a regularized
/// least-squares input step against Y' = V^T Omega^{1/2} Y followed by the
/// chosen orthonormal output step, until the relative Frobenius change of U
/// drops below `tol` or `max_iter` sweeps elapse.
ProjectionModel fit_iterative(const MvaProblem& p, Index k, const Penalty& penalty,
                              WStepStrategy strategy, const InitScheme& init,
                              int max_iter = 500, double tol = 1e-6);
ProjectionModel fit_iterative(const Dataset& d, const MvaVariant& variant, Index k,
                              const Penalty& penalty, WStepStrategy strategy,
                              const InitScheme& init, int max_iter = 500, double tol = 1e-6);

/// One exact unregularized sweep of the polar-factor iteration from a square
/// orthogonal V0, returning ||V1 - V0||_F. Dyads belonging to numerically
/// zero singular values (where the polar factor is non-unique) are aligned
/// to V0 before differencing. Throws when V0 is not orthogonal or C_XX is
/// singular.
double stall_check(const MvaProblem& p, const Matrixd& v0);
double stall_check(const Dataset& d, const MvaVariant& variant, const Matrixd& v0);

}  // namespace mva
