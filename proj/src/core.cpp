#include "mva/core.hpp"

#include <stdexcept>

#include "mva/linalg.hpp"

namespace mva {

MvaProblem make_problem(const Dataset& d, const MvaVariant& variant) {
  const Covariances& cov = covariances(d);

  MvaProblem p;
  p.variant = variant;
  p.n = d.n();
  p.cxx = cov.cxx;

  switch (variant.tag) {
    case MvaVariant::Tag::PCA:
      p.m = d.n();
      p.cyy = cov.cxx;
      p.cxy = cov.cxx;
      p.omega = Matrixd::Identity(p.m, p.m);
      p.omega_sqrt = p.omega;
      p.omega_inv_sqrt = p.omega;
      break;
    case MvaVariant::Tag::OPLS:
      p.m = d.m();
      p.cyy = cov.cyy;
      p.cxy = cov.cxy;
      p.omega = Matrixd::Identity(p.m, p.m);
      p.omega_sqrt = p.omega;
      p.omega_inv_sqrt = p.omega;
      break;
    case MvaVariant::Tag::CCA: {
      p.m = d.m();
      p.cyy = cov.cyy;
      p.cxy = cov.cxy;
      const double jitter = variant.omega_jitter
                                ? *variant.omega_jitter
                                : 1e-8 * p.cyy.trace() / static_cast<double>(p.m);
      p.omega_sqrt = inv_sqrt_psd(p.cyy, jitter);
      p.omega_inv_sqrt = sqrt_psd(p.cyy, jitter);
      p.omega = p.omega_sqrt * p.omega_sqrt;
      break;
    }
  }

  p.output_energy = (p.omega * p.cyy).trace();
  p.cxx_eigmax = sym_eig(p.cxx).eigenvalues(0);
  return p;
}

Matrixd reduced_coupling(const MvaProblem& p, double gamma) {
  const Matrixd cinv = regularized_inverse(p.cxx, gamma);
  const Matrixd half = p.cxy * p.omega_sqrt;  // n x m
  return half.transpose() * cinv * half;
}

ProjectionModel fit_closed_form(const MvaProblem& p, Index k, double gamma) {
  if (k < 1 || k > std::min(p.n, p.m))
    throw std::invalid_argument("fit_closed_form: k out of range [1, min(n, m)]");

  const SymEig<double> eig = sym_eig(reduced_coupling(p, gamma));

  ProjectionModel model;
  model.k = k;
  model.gamma = gamma;
  model.penalty = gamma > 0.0 ? Penalty::ridge(gamma) : Penalty::none();
  model.v = eig.eigenvectors.leftCols(k);
  model.lambda = eig.eigenvalues.head(k);
  model.u = regularized_inverse(p.cxx, gamma) * (p.cxy * (p.omega_sqrt * model.v));
  model.w = p.omega_inv_sqrt * model.v;
  model.flags.repeated_eigenvalues = eig.repeated;
  model.flags.zero_eigenvalues =
      model.lambda(k - 1) <= 1e-12 * std::max(eig.eigenvalues(0), 0.0);
  return model;
}

ProjectionModel fit_closed_form(const Dataset& d, const MvaVariant& variant, Index k,
                                double gamma) {
  return fit_closed_form(make_problem(d, variant), k, gamma);
}

double objective(const MvaProblem& p, const Matrixd& u, const Matrixd& w, double gamma,
                 const Penalty& penalty) {
  if (u.rows() != p.n || w.rows() != p.m || u.cols() != w.cols())
    throw std::invalid_argument("objective: shape mismatch");
  const Matrixd omega_w = p.omega * w;
  const double cross = (u.transpose() * p.cxy * omega_w).trace();
  const double quad = (u.transpose() * p.cxx * u * (w.transpose() * omega_w)).trace();
  return p.output_energy - 2.0 * cross + quad + gamma * penalty_value(u, penalty);
}

double objective(const Dataset& d, const MvaVariant& variant, const Matrixd& u,
                 const Matrixd& w, double gamma, const Penalty& penalty) {
  return objective(make_problem(d, variant), u, w, gamma, penalty);
}

double trace_objective(const MvaProblem& p, const Matrixd& v, double gamma) {
  return (v.transpose() * reduced_coupling(p, gamma) * v).trace();
}

double uncorrelation_residual(const Matrixd& u, const Matrixd& cxx) {
  return offdiagonal_norm(u.transpose() * cxx * u);
}

}  // namespace mva
