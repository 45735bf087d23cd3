#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlab/symmetrize.hpp"

namespace dlab {

// One decoupling cycle: |G| subintervals of length delta_t. The cycle time is
// always derived, never stored.
struct CycleSpec {
  DecouplingGroup group;
  double delta_t = 0.0;

  double cycle_time() const { return group.order() * delta_t; }
};

enum class Scheme {
  parallel_slow,           // apply A in Z_H(G) alongside the decoupler
  twisted_slow,            // bracket the window with P ... P^dag
  drift_identity_frame,    // switch B on during the identity-frame subinterval
  drift_strength_restored  // switch g_j B g_j^dag on during subinterval j
};

const char* scheme_name(Scheme s);

// A schedule window spanning an integer number of cycles.
//
// `hamiltonian` is always the effective new term the window contributes:
// A in Z_H(G) for parallel_slow, the twisted-frame B in Z_H(P^dag G P) for
// twisted_slow (the lab drive is then P B P^dag, itself in Z_H(G)), and the
// unconstrained B for the drift schemes.
struct Window {
  Scheme scheme = Scheme::parallel_slow;
  Operator hamiltonian;
  long cycles = 1;
  std::optional<Operator> pulse;  // P, twisted_slow only
};

struct ControlSchedule {
  std::vector<Window> windows;

  long total_cycles() const {
    long n = 0;
    for (const Window& w : windows) n += w.cycles;
    return n;
  }
};

// Throws ConstraintError naming the violated invariant; returns normally for
// a valid window. `tol` gates the centralizer-membership checks.
void check_window(const DecouplingGroup& g, const Window& w,
                  double tol = kDefaultTol);

// Decoupling pulses D_j = g_j g_{j-1}^dag, j = 1..|G| with g_|G| := g_0, so
// the cycle reads: free evolution, D_1, free, D_2, ..., free, D_|G|. The
// ordered product D_|G| ... D_1 telescopes to the identity.
std::vector<Operator> pulses_from_group(const CycleSpec& spec);

// First-order (ideal-limit) effective Hamiltonian of one window:
//   parallel_slow:           Pi_G(H) + A
//   twisted_slow:            Pi_Gt(P^dag H P) + B,  Gt = P^dag G P
//   drift_identity_frame:    Pi_G(H) + B / |G|
//   drift_strength_restored: Pi_G(H) + B
Operator effective_hamiltonian(const CycleSpec& spec, const Operator& h,
                               const Window& w, double tol = kDefaultTol);

struct LieClosureReport {
  int generator_count = 0;
  int closure_dimension = 0;    // real dimension of the closed algebra
  int traceless_dimension = 0;  // after projecting out the identity direction
  bool contains_identity = false;
  bool universal = false;  // traceless_dimension == d^2 - 1
  std::vector<Operator> basis;  // HS-orthonormal anti-Hermitian operators
};

// Real Lie algebra generated by {i A_k} under commutation, by breadth-first
// commutator sweeps with incremental orthonormalization. max_dim < 0 means
// d^2. Throws ResourceError (carrying the partial dimension) if a new
// direction appears beyond max_dim.
LieClosureReport lie_closure(const std::vector<Operator>& hermitian_generators,
                             int max_dim = -1);

// One fast-control capability for the universality audit.
// twisted_slow: `op` is a Hamiltonian in Z_H(G), `pulse` the bracketing P;
//   the reachable direction is P^dag op P.
// drift schemes: `op` is the modulated B; the reachable direction is B.
struct FastControl {
  Scheme scheme = Scheme::drift_identity_frame;
  Operator op;
  std::optional<Operator> pulse;
};

// Collects every effective-Hamiltonian direction reachable from the declared
// slow and fast capabilities and runs lie_closure on the union.
LieClosureReport universality_audit(const DecouplingGroup& g,
                                    const std::vector<Operator>& slow_set,
                                    const std::vector<FastControl>& fast_set,
                                    double tol = kDefaultTol);

}  // namespace dlab
