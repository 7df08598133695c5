#include "mva/iterate.hpp"

#include <cmath>

#include "mva/linalg.hpp"
#include "mva/random.hpp"

namespace mva {

Matrixd initial_v(const MvaProblem& p, Index k, const InitScheme& init) {
  switch (init.kind) {
    case InitScheme::Kind::RandomUniform: {
      Rng rng(init.seed);
      return rng.uniform_matrix(p.m, k);
    }
    case InitScheme::Kind::OrthogonalOfOmegaCovariance:
      return sym_eig(p.cyy).eigenvectors.leftCols(k);
    case InitScheme::Kind::Ideal:
      return fit_closed_form(p, k, 0.0).v;
  }
  throw std::logic_error("initial_v: unknown init scheme");
}

ProjectionModel fit_iterative(const MvaProblem& p, Index k, const Penalty& penalty,
                              WStepStrategy strategy, const InitScheme& init, int max_iter,
                              double tol) {
  if (k < 1 || k > std::min(p.n, p.m))
    throw std::invalid_argument("fit_iterative: k out of range [1, min(n, m)]");

  const Matrixd coupling = p.cxy * p.omega_sqrt;  // n x m, so B = coupling * V
  const double gamma = penalty.effective_gamma();

  ProjectionModel model;
  model.k = k;
  model.gamma = gamma;
  model.penalty = penalty;
  model.v = initial_v(p, k, init);
  model.u = Matrixd::Zero(p.n, k);
  model.converged = false;

  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    const Matrixd b = coupling * model.v;
    const UStepResult ustep = u_step_gram(p.cxx, b, penalty, &model.u);
    model.flags.inner_not_converged = model.flags.inner_not_converged || !ustep.converged;

    const double u_rel_change =
        (ustep.u - model.u).norm() / (model.u.norm() + 1e-12);
    if (sweep > 1 && u_rel_change < tol) {
      model.u = ustep.u;
      model.iterations = sweep - 1;
      model.converged = true;
      TraceRecord rec;
      rec.objective = objective(p, model.u, p.omega_inv_sqrt * model.v, gamma, penalty);
      rec.u_rel_change = u_rel_change;
      rec.v_change = 0.0;
      rec.sparsity = sparsity_rate(model.u);
      model.trace.push_back(rec);
      break;
    }
    model.u = ustep.u;

    const Matrixd g = coupling.transpose() * model.u;  // m x k
    const WStepResult wstep =
        strategy == WStepStrategy::Procrustes ? w_step_procrustes(g) : w_step_eigen(g);
    const double v_change = (wstep.v - model.v).norm();
    model.flags.rank_deficient_wstep = model.flags.rank_deficient_wstep || wstep.rank_deficient;
    model.flags.repeated_eigenvalues = model.flags.repeated_eigenvalues || wstep.repeated;
    model.v = wstep.v;
    if (strategy == WStepStrategy::Eigen) model.lambda = wstep.lambda;
    model.iterations = sweep;

    TraceRecord rec;
    rec.objective = objective(p, model.u, p.omega_inv_sqrt * model.v, gamma, penalty);
    rec.u_rel_change = u_rel_change;
    rec.v_change = v_change;
    rec.sparsity = sparsity_rate(model.u);
    model.trace.push_back(rec);
    if (!std::isfinite(rec.objective)) throw IterationDivergence(model.trace);
  }

  model.w = p.omega_inv_sqrt * model.v;
  if (strategy == WStepStrategy::Procrustes || model.lambda.size() == 0) {
    // Spectrum of the final coupling; for the eigenvalue strategy this is
    // what the last sweep already produced.
    const Matrixd g = coupling.transpose() * model.u;
    model.lambda = w_step_eigen(g).lambda;
  }
  model.flags.zero_solution = model.u.norm() == 0.0;
  return model;
}

ProjectionModel fit_iterative(const Dataset& d, const MvaVariant& variant, Index k,
                              const Penalty& penalty, WStepStrategy strategy,
                              const InitScheme& init, int max_iter, double tol) {
  return fit_iterative(make_problem(d, variant), k, penalty, strategy, init, max_iter, tol);
}

double stall_check(const MvaProblem& p, const Matrixd& v0) {
  if (v0.rows() != p.m || v0.cols() != p.m)
    throw std::invalid_argument("stall_check: V0 must be square (m x m)");
  const Matrixd eye = Matrixd::Identity(p.m, p.m);
  if ((v0.transpose() * v0 - eye).norm() > 1e-10)
    throw std::invalid_argument("stall_check: V0 is not orthogonal");

  const Matrixd cxx_inv = regularized_inverse(p.cxx, 0.0);
  const Matrixd u1 = cxx_inv * (p.cxy * (p.omega_sqrt * v0));
  const Matrixd g = p.omega_sqrt * p.cxy.transpose() * u1;
  const Svd<double> svd = thin_svd(g);

  // Polar factor of g, with the dyads of numerically zero singular values
  // (free directions of the polar solution) completed so they agree with V0.
  Matrixd v1 = Matrixd::Zero(p.m, p.m);
  const Index r = svd.rank;
  v1 += svd.q.leftCols(r) * svd.p.leftCols(r).transpose();
  if (r < p.m) {
    const Matrixd q0 = svd.q.rightCols(p.m - r);
    const Matrixd p0 = svd.p.rightCols(p.m - r);
    const Matrixd inner = q0.transpose() * v0 * p0;  // orthogonal when V1 = V0 holds
    const Svd<double> polar = thin_svd(inner);
    v1 += q0 * (polar.q * polar.p.transpose()) * p0.transpose();
  }
  return (v1 - v0).norm();
}

double stall_check(const Dataset& d, const MvaVariant& variant, const Matrixd& v0) {
  return stall_check(make_problem(d, variant), v0);
}

}  // namespace mva
