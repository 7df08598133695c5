#include "mva/metrics.hpp"

#include <stdexcept>

#include "mva/core.hpp"
#include "mva/linalg.hpp"

namespace mva {

Vectord tev(const Matrixd& u, const Matrixd& cxx, Index k) {
  if (k < 1 || k > u.cols()) throw std::invalid_argument("tev: k out of range");
  const Matrixd uk = u.leftCols(k);
  const Vectord r = qr_diagonal_abs(uk.transpose() * cxx * uk);
  Vectord out(k);
  double run = 0.0;
  for (Index j = 0; j < k; ++j) {
    run += r(j);
    out(j) = run;
  }
  return out;
}

double cef(const Matrixd& u, const Matrixd& cxx) { return uncorrelation_residual(u, cxx); }

}  // namespace mva
