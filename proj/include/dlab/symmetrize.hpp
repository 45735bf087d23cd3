#pragma once

#include <vector>

#include "dlab/operator.hpp"

namespace dlab {

// Finite set of bang-bang unitaries, closed under multiplication up to a
// global phase, with the identity stored first. Build through verify_group
// (or close_group for a generating set); twist/embed preserve validity.
struct DecouplingGroup {
  std::vector<Operator> elements;  // elements[0] == identity, exactly

  int order() const { return static_cast<int>(elements.size()); }
  Eigen::Index dim() const {
    return elements.empty() ? 0 : elements.front().rows();
  }
};

// Span of traceless Hermitian system-side error generators.
struct ErrorSpace {
  std::vector<Operator> generators;

  int count() const { return static_cast<int>(generators.size()); }
  Eigen::Index dim() const {
    return generators.empty() ? 0 : generators.front().rows();
  }
};

// Validates a full element list: unitarity, identity present (up to phase,
// replaced by the exact identity and moved to the front), pairwise closure up
// to phase. Throws StructureError / ClosureError / ArgumentError.
DecouplingGroup verify_group(std::vector<Operator> elements, double tol = 1e-9);

// Closes a generating set by repeated multiplication, then validates.
// Throws ClosureError once the element count would exceed `cap` -- the way an
// accidentally-infinite generated set shows up in floating point.
DecouplingGroup close_group(const std::vector<Operator>& generators,
                            int cap = 4096, double tol = 1e-9);

// Validates generators: traceless, Hermitian, linearly independent.
ErrorSpace make_error_space(std::vector<Operator> generators,
                            double tol = kDefaultTol);

// Group average Pi_G(H) = |G|^-1 sum_j g_j^dag H g_j: the projector onto the
// centralizer Z(G). Hermiticity-preserving, idempotent, trace-preserving.
Operator project(const DecouplingGroup& g, const Operator& h);

// True iff max_j ||[o, g_j]||_HS <= tol * scale, scale = max(1, ||o||_HS).
bool in_centralizer(const DecouplingGroup& g, const Operator& o,
                    double tol = kDefaultTol);

struct CorrectabilityReport {
  bool correctable;
  std::vector<double> residuals;  // ||Pi_G(E_alpha)||_HS per generator
};

// An error space is correctable when the group average annihilates every
// generator. Residuals are reported for diagnostics either way.
CorrectabilityReport is_correctable(const DecouplingGroup& g,
                                    const ErrorSpace& e,
                                    double tol = kDefaultTol);

// Twisted decoupler P^dag G P. Conjugation preserves closure exactly, so the
// result is a valid group of the same order. Throws ArgumentError when p is
// not unitary or dimensions mismatch.
DecouplingGroup twist(const DecouplingGroup& g, const Operator& p,
                      double tol = kDefaultTol);

// Hilbert-Schmidt-orthonormal operator basis of Z(G) = image of Pi_G,
// computed by projecting the matrix-unit basis and rank-revealing SVD with a
// relative singular-value threshold.
std::vector<Operator> centralizer_basis(const DecouplingGroup& g,
                                        double rel_threshold = 1e-9);

// Pi_G as a d^2 x d^2 matrix acting on column-stacked operators. Used to
// cross-check centralizer_basis: the eigenvalues are 0/1 and the rank equals
// the basis size.
Eigen::MatrixXcd projector_superoperator(const DecouplingGroup& g);

// g_j (x) identity(bath_dim) elementwise; a valid group on system (x) bath.
DecouplingGroup embed_group(const DecouplingGroup& g, Eigen::Index bath_dim);

}  // namespace dlab
