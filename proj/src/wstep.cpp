#include "mva/wstep.hpp"

#include <sstream>
#include <stdexcept>

#include "mva/linalg.hpp"

namespace mva {

WStepResult w_step_procrustes(const Matrixd& g) {
  const Svd<double> svd = thin_svd(g);
  WStepResult out;
  out.v = svd.q * svd.p.transpose();
  out.rank_deficient = svd.rank < g.cols();
  return out;
}

WStepResult w_step_eigen(const Matrixd& g) {
  const Index k = g.cols();
  const SymEig<double> eig = sym_eig(g * g.transpose());

  WStepResult out;
  out.v = eig.eigenvectors.leftCols(k);
  out.lambda = eig.eigenvalues.head(k);
  const double scale = std::max(eig.eigenvalues(0), 1e-300);
  for (Index i = 0; i + 1 < k; ++i) {
    if (out.lambda(i) - out.lambda(i + 1) <= 1e-9 * scale) {
      out.repeated = true;
      break;
    }
  }
  out.rank_deficient = out.lambda(k - 1) <= 1e-12 * scale;
  return out;
}

Matrixd rotation_between(const Matrixd& v_p, const Matrixd& v_eig, const Matrixd& g) {
  if (v_p.rows() != v_eig.rows() || v_p.cols() != v_eig.cols())
    throw std::invalid_argument("rotation_between: shape mismatch");
  Svd<double> svd = thin_svd(g);

  // Align the SVD's left factor with the supplied eigenvector basis before
  // forming the rotation; the flips are mirrored onto P so Q P^T is
  // unchanged.
  for (Index j = 0; j < svd.q.cols(); ++j) {
    if (svd.q.col(j).dot(v_eig.col(j)) < 0.0) {
      svd.q.col(j) = -svd.q.col(j);
      svd.p.col(j) = -svd.p.col(j);
    }
  }

  const Matrixd rotation = svd.p.transpose();
  const double residual = (v_p - v_eig * rotation).norm();
  if (residual > 1e-8 * std::max(1.0, v_p.norm())) {
    std::ostringstream msg;
    msg << "rotation_between: inputs do not share an SVD, residual " << residual;
    throw std::runtime_error(msg.str());
  }
  return rotation;
}

FeatureCorrelation procrustes_feature_correlation(const MvaProblem& p, const Matrixd& v_p) {
  const Matrixd cxx_inv = regularized_inverse(p.cxx, 0.0);
  const Matrixd u_p = cxx_inv * (p.cxy * (p.omega_sqrt * v_p));
  const Svd<double> svd = thin_svd(p.omega_sqrt * p.cxy.transpose() * u_p);

  FeatureCorrelation out;
  out.gram = u_p.transpose() * p.cxx * u_p;
  out.rotated_spectrum = svd.p * svd.singular_values.asDiagonal() * svd.p.transpose();
  out.residual = (out.gram - out.rotated_spectrum).norm();
  return out;
}

FeatureCorrelation procrustes_feature_correlation(const Dataset& d, const MvaVariant& variant,
                                                  const Matrixd& v_p) {
  return procrustes_feature_correlation(make_problem(d, variant), v_p);
}

}  // namespace mva
