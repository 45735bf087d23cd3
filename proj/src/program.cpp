#include "dlab/program.hpp"

#include <deque>
#include <sstream>

namespace dlab {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::parallel_slow: return "slow";
    case Scheme::twisted_slow: return "twisted";
    case Scheme::drift_identity_frame: return "drift_identity";
    case Scheme::drift_strength_restored: return "drift_restored";
  }
  return "?";
}

void check_window(const DecouplingGroup& g, const Window& w, double tol) {
  const int d = g.dim();
  if (w.hamiltonian.rows() != d || w.hamiltonian.cols() != d)
    throw ConstraintError("window hamiltonian is " +
                          std::to_string(w.hamiltonian.rows()) + "x" +
                          std::to_string(w.hamiltonian.cols()) +
                          " but the group acts on dimension " +
                          std::to_string(d));
  if (!is_hermitian(w.hamiltonian, 1e-9))
    throw ConstraintError("window hamiltonian is not Hermitian");
  if (w.cycles < 1)
    throw ConstraintError("window must span at least one cycle, got " +
                          std::to_string(w.cycles));

  switch (w.scheme) {
    case Scheme::parallel_slow: {
      if (w.pulse) throw ConstraintError("slow window does not take a pulse");
      if (!in_centralizer(g, w.hamiltonian, tol))
        throw ConstraintError(
            "slow window hamiltonian does not commute with the decoupling "
            "group; it would be averaged away");
      break;
    }
    case Scheme::twisted_slow: {
      if (!w.pulse) throw ConstraintError("twisted window requires a pulse");
      const Operator& p = *w.pulse;
      if (p.rows() != d || p.cols() != d)
        throw ConstraintError("twist pulse dimension mismatch");
      if (!is_unitary(p, 1e-9))
        throw ConstraintError("twist pulse is not unitary");
      DecouplingGroup gt = twist(g, p);
      if (!in_centralizer(gt, w.hamiltonian, tol))
        throw ConstraintError(
            "twisted window hamiltonian does not commute with the twisted "
            "group; it would be averaged away");
      break;
    }
    case Scheme::drift_identity_frame:
    case Scheme::drift_strength_restored:
      if (w.pulse) throw ConstraintError("drift window does not take a pulse");
      break;  // any Hermitian B is admissible
  }
}

std::vector<Operator> pulses_from_group(const CycleSpec& spec) {
  const auto& g = spec.group.elements;
  const int n = static_cast<int>(g.size());
  if (n == 0) throw ArgumentError("empty decoupling group");
  std::vector<Operator> pulses;
  pulses.reserve(n);
  for (int j = 1; j < n; ++j) pulses.push_back(g[j] * g[j - 1].adjoint());
  pulses.push_back(g[0] * g[n - 1].adjoint());
  return pulses;
}

Operator effective_hamiltonian(const CycleSpec& spec, const Operator& h,
                               const Window& w, double tol) {
  check_window(spec.group, w, tol);
  const int d = spec.group.dim();
  if (h.rows() != d || h.cols() != d)
    throw ArgumentError("ambient hamiltonian dimension mismatch");

  switch (w.scheme) {
    case Scheme::parallel_slow:
      return project(spec.group, h) + w.hamiltonian;
    case Scheme::twisted_slow: {
      const Operator& p = *w.pulse;
      DecouplingGroup gt = twist(spec.group, p);
      return project(gt, p.adjoint() * h * p) + w.hamiltonian;
    }
    case Scheme::drift_identity_frame:
      return project(spec.group, h) +
             w.hamiltonian / static_cast<double>(spec.group.order());
    case Scheme::drift_strength_restored:
      return project(spec.group, h) + w.hamiltonian;
  }
  throw ArgumentError("unknown scheme");
}

namespace {

// Component of x orthogonal to the span of basis (HS inner product), with
// one re-orthogonalization pass for stability.
Operator ortho_residual(const std::vector<Operator>& basis, Operator x) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Operator& b : basis) x -= hs_inner(b, x) * b;
  return x;
}

}  // namespace

LieClosureReport lie_closure(const std::vector<Operator>& hermitian_generators,
                             int max_dim) {
  LieClosureReport rep;
  rep.generator_count = static_cast<int>(hermitian_generators.size());
  if (hermitian_generators.empty()) return rep;

  const int d = static_cast<int>(hermitian_generators[0].rows());
  if (max_dim < 0) max_dim = d * d;

  constexpr double kRelThreshold = 1e-8;
  std::vector<Operator>& basis = rep.basis;

  // Scale reference: largest generator norm, so the relative threshold does
  // not depend on overall units.
  double scale = 0.0;

  auto try_add = [&](const Operator& x) -> bool {
    Operator r = ortho_residual(basis, x);
    double n = hs_norm(r);
    if (n <= kRelThreshold * std::max(1.0, scale)) return false;
    if (static_cast<int>(basis.size()) >= max_dim)
      throw ResourceError(
          "lie closure exceeded the dimension cap " + std::to_string(max_dim),
          static_cast<int>(basis.size()));
    basis.push_back(r / n);
    return true;
  };

  for (const Operator& a : hermitian_generators) {
    if (a.rows() != d || a.cols() != d)
      throw ArgumentError("closure generators must share one dimension");
    if (!is_hermitian(a, 1e-9))
      throw ArgumentError("closure generators must be Hermitian");
    Operator x = Cplx(0.0, 1.0) * a;
    scale = std::max(scale, hs_norm(x));
    try_add(x);
  }

  // Breadth-first commutator sweeps: new elements against the whole current
  // basis until no sweep produces a new direction.
  std::size_t frontier_begin = 0;
  while (frontier_begin < basis.size()) {
    const std::size_t frontier_end = basis.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i)
      for (std::size_t j = 0; j < frontier_end && j < basis.size(); ++j) {
        if (i == j) continue;
        try_add(commutator(basis[i], basis[j]));
      }
    frontier_begin = frontier_end;
  }

  rep.closure_dimension = static_cast<int>(basis.size());

  // i*identity is the trace direction; anti-Hermitian X has imaginary trace.
  Operator iid = Cplx(0.0, 1.0) * identity_op(d);
  Operator res = ortho_residual(basis, iid);
  rep.contains_identity = hs_norm(res) <= 1e-6 * hs_norm(iid);
  rep.traceless_dimension =
      rep.closure_dimension - (rep.contains_identity ? 1 : 0);
  rep.universal = rep.traceless_dimension == d * d - 1;
  return rep;
}

LieClosureReport universality_audit(const DecouplingGroup& g,
                                    const std::vector<Operator>& slow_set,
                                    const std::vector<FastControl>& fast_set,
                                    double tol) {
  std::vector<Operator> directions;
  for (const Operator& a : slow_set) {
    if (!in_centralizer(g, a, tol))
      throw ConstraintError(
          "slow control hamiltonian does not commute with the decoupling "
          "group");
    directions.push_back(a);
  }
  for (const FastControl& f : fast_set) {
    switch (f.scheme) {
      case Scheme::twisted_slow: {
        if (!f.pulse)
          throw ConstraintError("twisted capability requires a pulse");
        if (!in_centralizer(g, f.op, tol))
          throw ConstraintError(
              "twisted capability hamiltonian does not commute with the "
              "decoupling group");
        directions.push_back(f.pulse->adjoint() * f.op * (*f.pulse));
        break;
      }
      case Scheme::drift_identity_frame:
      case Scheme::drift_strength_restored:
        if (!is_hermitian(f.op, 1e-9))
          throw ConstraintError("drift capability must be Hermitian");
        directions.push_back(f.op);
        break;
      case Scheme::parallel_slow:
        throw ConstraintError(
            "slow hamiltonians belong in the slow set, not the fast set");
    }
  }
  return lie_closure(directions);
}

}  // namespace dlab
