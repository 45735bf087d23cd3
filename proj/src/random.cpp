#include "dlab/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

namespace dlab {

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

Operator random_hermitian(Eigen::Index dim, Rng& rng, double spectral_norm) {
  Operator m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rng.cgaussian();
  Operator h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (radius > 1e-300) h *= spectral_norm / radius;
  return h;
}

Operator random_unitary(Eigen::Index dim, Rng& rng) {
  Operator m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rng.cgaussian();
  Eigen::HouseholderQR<Operator> qr(m);
  Operator q = qr.householderQ();
  Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    Cplx rkk = r(k, k);
    double mag = std::abs(rkk);
    q.col(k) *= (mag > 0) ? rkk / mag : Cplx(1, 0);
  }
  return q;
}

StateVector random_state(Eigen::Index dim, Rng& rng) {
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.cgaussian();
  double n = v.norm();
  if (n > 1e-300) v /= n;
  return v;
}

}  // namespace dlab
