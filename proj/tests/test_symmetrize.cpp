#include <doctest.h>

#include <cmath>

#include "dlab/builtins.hpp"
#include "dlab/operator.hpp"
#include "dlab/random.hpp"
#include "dlab/symmetrize.hpp"
#include "testutil.hpp"

using namespace dlab;
using testutil::max_entry_diff;

namespace {
const Cplx kI(0.0, 1.0);
}

TEST_CASE("verify_group canonicalizes the identity slot") {
  // Identity supplied last and with a global phase; it must come back first
  // and exact.
  Cplx phase = std::polar(1.0, 0.4);
  DecouplingGroup g = verify_group({pauli('x'), phase * identity_op(2)});
  CHECK(g.order() == 2);
  CHECK(max_entry_diff(g.elements[0], identity_op(2)) == 0.0);
  CHECK(equal_up_to_phase(g.elements[1], pauli('x')));
}

TEST_CASE("verify_group rejects bad sets") {
  CHECK_THROWS_AS(verify_group({identity_op(2), pauli('x'), pauli('z')}),
                  ClosureError);
  CHECK_THROWS_AS(
      verify_group({identity_op(2), expm(Cplx(0, -0.3) * pauli('x'))}),
      ClosureError);  // generic rotation generates an infinite group
  CHECK_THROWS_AS(verify_group({pauli('x'), pauli('y'), pauli('z')}),
                  StructureError);  // no identity
  CHECK_THROWS_AS(verify_group({identity_op(2), 2.0 * pauli('x')}),
                  ArgumentError);  // not unitary
  CHECK_THROWS_AS(verify_group({}), ArgumentError);
  CHECK_THROWS_AS(verify_group({identity_op(2), identity_op(3)}),
                  ArgumentError);
}

TEST_CASE("close_group completes a generating set") {
  DecouplingGroup g = close_group({pauli('x')});
  CHECK(g.order() == 2);
  DecouplingGroup cp = close_group({pauli('x'), pauli('z')});
  CHECK(cp.order() == 4);  // phases quotiented out
}

TEST_CASE("close_group caps runaway generators") {
  // An irrational rotation never closes; the cap must fire.
  Operator r = expm(-kI * 0.1234567 * pauli('z'));
  CHECK_THROWS_AS(close_group({r}, 64), ClosureError);
}

TEST_CASE("make_error_space validates generators") {
  ErrorSpace e = make_error_space({pauli('x'), pauli('y')});
  CHECK(e.count() == 2);
  CHECK_THROWS_AS(make_error_space({identity_op(2)}), ArgumentError);
  CHECK_THROWS_AS(make_error_space({kI * pauli('x')}), ArgumentError);
  CHECK_THROWS_AS(make_error_space({pauli('x'), -pauli('x')}), ArgumentError);
}

TEST_CASE("project is the centralizer projector") {
  Rng rng(21);
  DecouplingGroup g = collective_pauli_group(2);
  for (int trial = 0; trial < 5; ++trial) {
    Operator h = random_hermitian(4, rng);
    Operator p = project(g, h);
    CHECK(is_hermitian(p));
    CHECK(max_entry_diff(project(g, p), p) < 1e-12);          // idempotent
    CHECK(std::abs(p.trace() - h.trace()) < 1e-12);           // trace kept
    CHECK(in_centralizer(g, p, 1e-10));                       // lands in Z(G)
    CHECK(std::abs(hs_inner(h - p, p)) < 1e-10);              // orthogonal
  }
}

TEST_CASE("project on known examples") {
  // Full single-qubit Pauli group wipes everything traceless.
  DecouplingGroup fp = full_pauli_group(1);
  Rng rng(22);
  Operator h = random_hermitian(2, rng);
  Operator expected = (h.trace() / 2.0) * identity_op(2);
  CHECK(max_entry_diff(project(fp, h), expected) < 1e-12);

  // Spin echo keeps sigma_x, kills sigma_z.
  DecouplingGroup echo = spin_echo_group();
  CHECK(max_entry_diff(project(echo, pauli('x')), pauli('x')) < 1e-15);
  CHECK(max_abs(project(echo, pauli('z'))) < 1e-15);
}

TEST_CASE("project requires matching dimensions") {
  CHECK_THROWS_AS(project(spin_echo_group(), identity_op(4)), ArgumentError);
}

TEST_CASE("in_centralizer distinguishes commuting operators") {
  DecouplingGroup echo = spin_echo_group();
  CHECK(in_centralizer(echo, pauli('x')));
  CHECK_FALSE(in_centralizer(echo, pauli('z')));
}

TEST_CASE("correctability of single-qubit dephasing under spin echo") {
  DecouplingGroup echo = spin_echo_group();
  ErrorSpace dephasing = make_error_space({pauli('z')});
  CorrectabilityReport r = is_correctable(echo, dephasing);
  CHECK(r.correctable);
  REQUIRE(r.residuals.size() == 1);
  CHECK(r.residuals[0] < 1e-14);
}

TEST_CASE("spin echo cannot correct a full independent error space") {
  DecouplingGroup echo = spin_echo_group();
  ErrorSpace all = make_error_space({pauli('x'), pauli('y'), pauli('z')});
  CorrectabilityReport r = is_correctable(echo, all);
  CHECK_FALSE(r.correctable);
  // sigma_x commutes with the group so it survives with full norm sqrt(2).
  CHECK(r.residuals[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.residuals[1] < 1e-14);
  CHECK(r.residuals[2] < 1e-14);
}

TEST_CASE("collective_pauli corrects independent errors") {
  for (int k = 1; k <= 2; ++k) {
    DecouplingGroup g = collective_pauli_group(k);
    std::vector<Operator> gens;
    for (int site = 1; site <= k; ++site)
      for (char axis : {'x', 'y', 'z'})
        gens.push_back(pauli_on(k, site, axis));
    CorrectabilityReport r = is_correctable(g, make_error_space(gens));
    CHECK(r.correctable);
  }
}

TEST_CASE("twist conjugates the projector") {
  Rng rng(23);
  DecouplingGroup g = collective_pauli_group(2);
  Operator p = random_unitary(4, rng);
  DecouplingGroup gt = twist(g, p);
  CHECK(gt.order() == g.order());
  Operator h = random_hermitian(4, rng);
  // Pi_{P^dag G P}(P^dag H P) = P^dag Pi_G(H) P, exactly the twisted frame.
  Operator lhs = project(gt, p.adjoint() * h * p);
  Operator rhs = p.adjoint() * project(g, h) * p;
  CHECK(max_entry_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("twist by a pi/4 y-rotation maps the echo group onto z") {
  Operator p = expm(Cplx(0, -kPi / 4.0) * pauli('y'));
  DecouplingGroup gt = twist(spin_echo_group(), p);
  CHECK(gt.order() == 2);
  CHECK(equal_up_to_phase(gt.elements[1], pauli('z')));
  // Twisting by the identity is a no-op.
  DecouplingGroup g0 = twist(spin_echo_group(), identity_op(2));
  CHECK(max_entry_diff(g0.elements[1], pauli('x')) < 1e-15);
}

TEST_CASE("twist rejects non-unitary frames") {
  CHECK_THROWS_AS(twist(spin_echo_group(), 2.0 * identity_op(2)),
                  ArgumentError);
  CHECK_THROWS_AS(twist(spin_echo_group(), identity_op(4)), ArgumentError);
}

TEST_CASE("centralizer_basis sizes for the builtin groups") {
  CHECK(centralizer_basis(full_pauli_group(1)).size() == 1);   // scalars only
  CHECK(centralizer_basis(spin_echo_group()).size() == 2);     // I, sigma_x
  // {II, XX, YY, ZZ} is abelian with four one-dimensional joint eigenspaces
  // (the Bell basis), so its commutant is the full diagonal algebra there.
  CHECK(centralizer_basis(collective_pauli_group(2)).size() == 4);
}

TEST_CASE("centralizer_basis is orthonormal and commutes with the group") {
  DecouplingGroup g = collective_pauli_group(2);
  auto basis = centralizer_basis(g);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(in_centralizer(g, basis[i], 1e-9));
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double expected = i == j ? 1.0 : 0.0;
      CHECK(std::abs(hs_inner(basis[i], basis[j]) - expected) < 1e-10);
    }
  }
}

TEST_CASE("projector_superoperator rank matches the basis size") {
  for (auto make : {collective_pauli_group, full_pauli_group}) {
    DecouplingGroup g = make(2);
    Eigen::MatrixXcd s = projector_superoperator(g);
    // Idempotent superoperator: eigenvalues 0/1, trace = rank.
    CHECK(max_entry_diff(Operator(s * s), Operator(s)) < 1e-12);
    double rank = s.trace().real();
    CHECK(rank == doctest::Approx(double(centralizer_basis(g).size())));
  }
}

TEST_CASE("embed_group acts trivially on the bath factor") {
  DecouplingGroup g = spin_echo_group();
  DecouplingGroup ge = embed_group(g, 3);
  CHECK(ge.order() == g.order());
  CHECK(ge.dim() == 6);
  CHECK(max_entry_diff(ge.elements[1], tensor(pauli('x'), identity_op(3))) <
        1e-15);
  // Projection with the embedded group leaves a pure-bath term alone.
  Rng rng(24);
  Operator hb = random_hermitian(3, rng);
  Operator joint = tensor(identity_op(2), hb);
  CHECK(max_entry_diff(project(ge, joint), joint) < 1e-12);
}

TEST_CASE("projection averages group-orbit conjugations") {
  // Direct definition check against a hand-rolled sum.
  Rng rng(25);
  DecouplingGroup g = full_pauli_group(1);
  Operator h = random_hermitian(2, rng);
  Operator sum = zero_op(2);
  for (const auto& e : g.elements) sum += e.adjoint() * h * e;
  CHECK(max_entry_diff(project(g, h), Operator(sum / double(g.order()))) <
        1e-13);
}
