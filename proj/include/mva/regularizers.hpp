#pragma once

#include <algorithm>
#include <cmath>

#include "mva/dataset.hpp"
#include "mva/types.hpp"
#include "mva/variant.hpp"

namespace mva {

/// Regularizer R(U) with strength gamma, plus inner-solver controls for the
/// penalties without a closed form.
struct Penalty {
  enum class Kind { None, Ridge, L1, L21 };

  Kind kind = Kind::None;
  double gamma = 0.0;
  int max_inner_iterations = 1000;
  double inner_tolerance = 1e-8;  // relative objective change

  static Penalty none() { return {Kind::None, 0.0}; }
  static Penalty ridge(double g) { return {Kind::Ridge, g}; }
  static Penalty l1(double g) { return {Kind::L1, g}; }
  static Penalty l21(double g) { return {Kind::L21, g}; }

  /// Effective strength used when evaluating R(U): zero for Kind::None.
  double effective_gamma() const { return kind == Kind::None ? 0.0 : gamma; }
};

inline double soft_threshold(double z, double tau) {
  const double mag = std::abs(z) - tau;
  if (mag <= 0.0) return 0.0;
  return z < 0.0 ? -mag : mag;
}

/// R(U) for the penalty kind (without the gamma factor).
double penalty_value(const Matrixd& u, const Penalty& penalty);

/// Fraction of entries with |u| <= 1e-12.
double sparsity_rate(const Matrixd& u);

struct UStepResult {
  Matrixd u;
  bool converged = true;
  int inner_iterations = 0;
};

/// Minimizer of ||Y' - U^T X||_F^2 + gamma R(U) given the Gram pair
/// cxx = X X^T and b = X Y'^T. None/ridge are solved in closed form, l1 by a
/// monotone accelerated proximal gradient per column, l21 by iteratively
/// reweighted ridge sweeps. `warm` seeds the iterative solvers.
UStepResult u_step_gram(const Matrixd& cxx, const Matrixd& b, const Penalty& penalty,
                        const Matrixd* warm = nullptr);

/// Dataset-facing form of the U-step: forms X Y'^T and delegates to
/// u_step_gram.
UStepResult u_step(const Dataset& d, const Matrixd& yprime, const Penalty& penalty);

/// Residual of the first-order optimality condition at `u` (zero at an exact
/// stationary point). Exposed so tests can certify solver output.
double stationarity_residual(const Matrixd& cxx, const Matrixd& b, const Matrixd& u,
                             const Penalty& penalty);

struct GammaSearchResult {
  double gamma = 0.0;
  double achieved_sr = 0.0;
  bool hit_target = true;  // false when clamped to a bracket endpoint or non-monotone
};

/// Bisection over log gamma in [1e-6, 1e6] for the smallest interval whose
/// fitted sparsity rate lands within +-tolerance of `target`. Fits use the
/// eigenvalue W-step with a fixed derived seed so the search is
/// deterministic.
GammaSearchResult gamma_for_sparsity(const Dataset& d, const MvaVariant& variant, Index k,
                                     Penalty::Kind kind, double target, double tolerance = 0.01);

}  // namespace mva
