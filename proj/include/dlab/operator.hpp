#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlab {

using Cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

// Default tolerance for "= 0" checks, in Hilbert-Schmidt norm scaled by the
// input size. Configurable per call everywhere it matters.
inline constexpr double kDefaultTol = 1e-10;

// Guard band (radians) around the branch cut at phase pi for principal logs.
inline constexpr double kBranchGuard = 1e-6;

// Largest Hilbert-space dimension the dense machinery is meant for.
inline constexpr int kMaxDim = 256;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Group element set is not closed under multiplication (up to phase).
class ClosureError : public Error {
 public:
  using Error::Error;
};

// Group element set lacks the identity (up to phase).
class StructureError : public Error {
 public:
  using Error::Error;
};

// Principal log is ill-defined: an eigenvalue sits on the branch cut.
class BranchCutError : public Error {
 public:
  using Error::Error;
};

// A schedule window violates its scheme's invariant.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

// Lie closure exceeded its dimension cap; carries the partial dimension.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& msg, int partial_dimension)
      : Error(msg), partial_dimension(partial_dimension) {}
  int partial_dimension;
};

// Window boundaries not aligned with cycle boundaries.
class SyncError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// State norm drifted beyond the numerical-integrity budget.
class NumericsError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Predicates and norms
// ---------------------------------------------------------------------------

// Frobenius norm sqrt(tr(X^dag X)); zero iff X = 0.
double hs_norm(const Operator& x);

// Hilbert-Schmidt inner product <X, Y> = tr(X^dag Y).
Cplx hs_inner(const Operator& x, const Operator& y);

// Largest |entry|.
double max_abs(const Operator& x);

bool is_hermitian(const Operator& x, double tol = kDefaultTol);
bool is_unitary(const Operator& x, double tol = kDefaultTol);
bool all_finite(const Operator& x);

// max |a - phi*b| minimized over unit phases phi, with phi read off the
// largest-magnitude entry of b. Physical operations are projective, so group
// elements compare equal under this. Returns the minimizing phase if asked.
bool equal_up_to_phase(const Operator& a, const Operator& b, double tol = 1e-9,
                       Cplx* phase_out = nullptr);

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Operator identity_op(Eigen::Index dim);
Operator zero_op(Eigen::Index dim);

// Single-qubit Pauli matrix; axis is one of 'x', 'y', 'z'.
Operator pauli(char axis);

// sigma_axis acting on qubit `site` (1-based) of an n_qubit register:
// I (x) ... (x) sigma (x) ... (x) I, site 1 leftmost. Dimension 2^n_qubits.
Operator pauli_on(int n_qubits, int site, char axis);

// Kronecker product a (x) b.
Operator tensor(const Operator& a, const Operator& b);

Operator commutator(const Operator& x, const Operator& y);

// ---------------------------------------------------------------------------
// Matrix functions
// ---------------------------------------------------------------------------

// e^X by Pade-13 scaling and squaring. Relative accuracy near machine
// precision for the norms used here (||X|| <= 50 documented).
Operator expm(const Operator& x);

// Principal log of a unitary: anti-Hermitian L with expm(L) = U and all
// eigenvalue phases in (-pi, pi). Throws BranchCutError when an eigenvalue
// sits within `branch_guard` radians of the cut at -1, and ArgumentError
// when U is not unitary to `unitary_tol`.
Operator logm_principal(const Operator& u, double branch_guard = kBranchGuard,
                        double unitary_tol = 1e-8);

// ---------------------------------------------------------------------------
// Hilbert-space bookkeeping
// ---------------------------------------------------------------------------

// Splitting of a dimension into tensor factors, e.g. {2,2,2} for 3 qubits or
// {2,4} for one qubit plus a 4-level bath.
struct HilbertFactorization {
  std::vector<Eigen::Index> subsystem_dims;

  Eigen::Index dim() const;
  // Throws ArgumentError unless the factor product matches x's dimension.
  void check_matches(const Operator& x) const;
};

// op (x) identity(bath_dim): embeds a system operator into system (x) bath.
Operator embed_system(const Operator& op, Eigen::Index bath_dim);

}  // namespace dlab
