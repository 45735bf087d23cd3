#include "dlab/operator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace dlab {

double hs_norm(const Operator& x) { return x.norm(); }

Cplx hs_inner(const Operator& x, const Operator& y) {
  return (x.adjoint() * y).trace();
}

double max_abs(const Operator& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& x, double tol) {
  if (x.rows() != x.cols()) return false;
  return max_abs(x - x.adjoint()) <= tol;
}

bool is_unitary(const Operator& x, double tol) {
  if (x.rows() != x.cols()) return false;
  Operator defect = x * x.adjoint() - identity_op(x.rows());
  return max_abs(defect) <= tol;
}

bool all_finite(const Operator& x) {
  return x.allFinite();
}

bool equal_up_to_phase(const Operator& a, const Operator& b, double tol,
                       Cplx* phase_out) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  // Read the candidate phase off the largest-magnitude entry of b.
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  double bmax = std::abs(b(r, c));
  if (bmax < tol) {
    // b ~ 0: equal iff a ~ 0 too.
    if (phase_out) *phase_out = Cplx(1, 0);
    return max_abs(a) <= tol;
  }
  Cplx phi = a(r, c) / b(r, c);
  double mag = std::abs(phi);
  if (mag < 1e-14) return false;
  phi /= mag;
  if (phase_out) *phase_out = phi;
  return max_abs(a - phi * b) <= tol;
}

Operator identity_op(Eigen::Index dim) {
  return Operator::Identity(dim, dim);
}

Operator zero_op(Eigen::Index dim) {
  return Operator::Zero(dim, dim);
}

Operator pauli(char axis) {
  Operator s(2, 2);
  switch (axis) {
    case 'x':
      s << 0, 1, 1, 0;
      break;
    case 'y':
      s << 0, Cplx(0, -1), Cplx(0, 1), 0;
      break;
    case 'z':
      s << 1, 0, 0, -1;
      break;
    default:
      throw ArgumentError(std::string("pauli: axis must be x, y or z, got '") +
                          axis + "'");
  }
  return s;
}

Operator pauli_on(int n_qubits, int site, char axis) {
  if (n_qubits < 1)
    throw ArgumentError("pauli_on: qubit count must be >= 1");
  if (n_qubits > 8)
    throw ArgumentError("pauli_on: register too large (dim cap " +
                        std::to_string(kMaxDim) + ")");
  if (site < 1 || site > n_qubits)
    throw ArgumentError("pauli_on: site " + std::to_string(site) +
                        " out of range 1.." + std::to_string(n_qubits));
  Operator result = (site == 1) ? pauli(axis) : identity_op(2);
  for (int q = 2; q <= n_qubits; ++q)
    result = tensor(result, q == site ? pauli(axis) : identity_op(2));
  return result;
}

Operator tensor(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator commutator(const Operator& x, const Operator& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ArgumentError("commutator: dimension mismatch (" +
                        std::to_string(x.rows()) + " vs " +
                        std::to_string(y.rows()) + ")");
  return x * y - y * x;
}

// ---------------------------------------------------------------------------
// expm: Pade approximants with scaling and squaring (Higham 2005 constants).
// ---------------------------------------------------------------------------

namespace {

void pade3(const Operator& a, Operator& u, Operator& v) {
  const double b[] = {120., 60., 12., 1.};
  Operator id = identity_op(a.rows());
  Operator a2 = a * a;
  u = a * (b[3] * a2 + b[1] * id);
  v = b[2] * a2 + b[0] * id;
}

void pade5(const Operator& a, Operator& u, Operator& v) {
  const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  Operator id = identity_op(a.rows());
  Operator a2 = a * a;
  Operator a4 = a2 * a2;
  u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const Operator& a, Operator& u, Operator& v) {
  const double b[] = {17297280., 8648640., 1995840., 277200.,
                      25200.,    1512.,    56.,      1.};
  Operator id = identity_op(a.rows());
  Operator a2 = a * a;
  Operator a4 = a2 * a2;
  Operator a6 = a4 * a2;
  u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const Operator& a, Operator& u, Operator& v) {
  const double b[] = {17643225600., 8821612800., 2075673600., 302702400.,
                      30270240.,    2162160.,    110880.,     3960.,
                      90.,          1.};
  Operator id = identity_op(a.rows());
  Operator a2 = a * a;
  Operator a4 = a2 * a2;
  Operator a6 = a4 * a2;
  Operator a8 = a6 * a2;
  u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const Operator& a, Operator& u, Operator& v) {
  const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                      1187353796428800.,  129060195264000.,   10559470521600.,
                      670442572800.,      33522128640.,       1323241920.,
                      40840800.,          960960.,            16380.,
                      182.,               1.};
  Operator id = identity_op(a.rows());
  Operator a2 = a * a;
  Operator a4 = a2 * a2;
  Operator a6 = a4 * a2;
  u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
           b[3] * a2 + b[1] * id);
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
      b[2] * a2 + b[0] * id;
}

double l1_norm(const Operator& a) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    best = std::max(best, a.col(j).cwiseAbs().sum());
  return best;
}

}  // namespace

Operator expm(const Operator& x) {
  if (x.rows() != x.cols())
    throw ArgumentError("expm: matrix must be square");
  if (!all_finite(x))
    throw ArgumentError("expm: non-finite entries");
  if (x.rows() == 0) return x;

  // Degree selection thresholds on the 1-norm (Higham 2005, double precision).
  const double theta3 = 1.495585217958292e-2;
  const double theta5 = 2.539398330063230e-1;
  const double theta7 = 9.504178996162932e-1;
  const double theta9 = 2.097847961257068e0;
  const double theta13 = 5.371920351148152e0;

  const double norm = l1_norm(x);
  Operator u, v;
  int squarings = 0;
  if (norm <= theta3) {
    pade3(x, u, v);
  } else if (norm <= theta5) {
    pade5(x, u, v);
  } else if (norm <= theta7) {
    pade7(x, u, v);
  } else if (norm <= theta9) {
    pade9(x, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(
                                std::ceil(std::log2(norm / theta13))));
    Operator scaled = x * std::pow(2.0, -squarings);
    pade13(scaled, u, v);
  }

  // (v - u)^-1 (v + u), then undo the scaling by repeated squaring.
  Operator result = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Operator logm_principal(const Operator& u, double branch_guard,
                        double unitary_tol) {
  if (u.rows() != u.cols())
    throw ArgumentError("logm_principal: matrix must be square");
  if (!is_unitary(u, unitary_tol))
    throw ArgumentError("logm_principal: input is not unitary");

  // Unitary matrices are normal, so the Schur form is diagonal up to
  // roundoff; the principal log acts on the eigenvalue phases.
  Eigen::ComplexSchur<Operator> schur(u);
  if (schur.info() != Eigen::Success)
    throw NumericsError("logm_principal: Schur decomposition failed");
  const Operator& t = schur.matrixT();
  const Operator& q = schur.matrixU();

  Eigen::Index d = u.rows();
  Eigen::VectorXcd logdiag(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    double theta = std::arg(t(k, k));
    if (std::abs(theta) > kPi - branch_guard)
      throw BranchCutError(
          "logm_principal: eigenvalue phase within guard band of the branch "
          "cut at -1 (reduce the cycle time)");
    logdiag(k) = Cplx(0, theta);
  }
  return q * logdiag.asDiagonal() * q.adjoint();
}

Eigen::Index HilbertFactorization::dim() const {
  Eigen::Index p = 1;
  for (Eigen::Index d : subsystem_dims) {
    if (d < 1) throw ArgumentError("HilbertFactorization: factor must be >= 1");
    p *= d;
  }
  return p;
}

void HilbertFactorization::check_matches(const Operator& x) const {
  if (dim() != x.rows() || x.rows() != x.cols())
    throw ArgumentError("HilbertFactorization: factor product " +
                        std::to_string(dim()) + " does not match operator dim " +
                        std::to_string(x.rows()));
}

Operator embed_system(const Operator& op, Eigen::Index bath_dim) {
  if (bath_dim < 1)
    throw ArgumentError("embed_system: bath dimension must be >= 1");
  if (bath_dim == 1) return op;
  return tensor(op, identity_op(bath_dim));
}

}  // namespace dlab
