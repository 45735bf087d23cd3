// Acceptance harness: runs the ten release criteria and prints one verdict
// line each. Exit code 0 only when every criterion passes.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dlab/builtins.hpp"
#include "dlab/dynamics.hpp"
#include "dlab/program.hpp"
#include "dlab/random.hpp"
#include "dlab/schedfmt.hpp"
#include "dlab/symmetrize.hpp"
#include "testutil.hpp"

using namespace dlab;

namespace {

const Cplx kImag(0.0, 1.0);

struct Verdict {
  bool pass = false;
  std::string details;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return std::string(buf);
}

std::vector<Operator> single_site_paulis(int n_qubits) {
  std::vector<Operator> out;
  for (int site = 1; site <= n_qubits; ++site)
    for (char ax : {'x', 'y', 'z'}) out.push_back(pauli_on(n_qubits, site, ax));
  return out;
}

StateVector plus_times_bath0(int bath_dim) {
  StateVector psi = StateVector::Zero(2 * bath_dim);
  psi[0] = 1.0 / std::sqrt(2.0);
  psi[bath_dim] = 1.0 / std::sqrt(2.0);
  return psi;
}

// The shared open-system benchmark: one qubit dephasing-coupled (strength
// 0.5) to a two-qubit bath with unit-spectral-norm bath Hamiltonian.
struct BenchSetup {
  Operator h;            // joint 8x8
  StateVector psi0;      // |+> (x) bath ground slot
  Operator rho_ideal_s;  // decoupled system target at time T
  double total_time;
};

BenchSetup make_bench(std::uint64_t seed, double total_time) {
  Rng rng(seed);
  Operator hb = random_hermitian(4, rng, 1.0);
  Operator bc = random_hermitian(4, rng, 1.0);
  BathModel bath;
  bath.bath_dim = 4;
  bath.h_bath = hb;
  bath.couplings.push_back({pauli('z'), Operator(0.5 * bc)});
  BenchSetup s;
  s.h = bath.joint_hamiltonian(zero_op(2));
  s.psi0 = plus_times_bath0(4);
  StateVector ideal =
      ideal_decoupled_target(spin_echo_group(), s.h, 4, total_time) * s.psi0;
  s.rho_ideal_s = trace_out_bath(ideal, 2, 4);
  s.total_time = total_time;
  return s;
}

double bench_infidelity(const BenchSetup& s, double t_c, double tau) {
  long n = std::lround(s.total_time / t_c);
  DecouplingGroup ge = embed_group(spin_echo_group(), 4);
  Operator u = cycle_propagator(CycleSpec{ge, t_c / 2.0}, s.h, tau);
  Operator un = identity_op(8);
  Operator base = u;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) un = un * base;
    base = base * base;
  }
  StateVector psi = un * s.psi0;
  return 1.0 - uhlmann_fidelity(trace_out_bath(psi, 2, 4), s.rho_ideal_s);
}

// --------------------------------------------------------------------------

Verdict criterion1() {
  Rng rng(1001);
  struct Case {
    DecouplingGroup g;
    int count;
  };
  std::vector<Case> cases;
  cases.push_back({spin_echo_group(), 34});
  cases.push_back({collective_pauli_group(1), 34});
  cases.push_back({collective_pauli_group(2), 34});
  cases.push_back({collective_pauli_group(3), 34});
  cases.push_back({full_pauli_group(1), 32});
  cases.push_back({full_pauli_group(2), 32});

  int total = 0;
  double worst = 0.0;
  for (const Case& c : cases) {
    const Eigen::Index d = c.g.dim();
    for (int i = 0; i < c.count; ++i, ++total) {
      Operator h = random_hermitian(d, rng);
      Operator p = project(c.g, h);
      double scale = std::max(1.0, hs_norm(h));
      double idem = hs_norm(project(c.g, p) - p) / scale;
      double tr = std::abs(p.trace() - h.trace()) / scale;
      double herm = hs_norm(Operator(p.adjoint()) - p) / scale;
      worst = std::max({worst, idem, tr, herm});
      if (!in_centralizer(c.g, p, 1e-10))
        return {false, fmt("projection left the centralizer (case %d)", total)};
    }
  }
  bool pass = total == 200 && worst <= 1e-10;
  return {pass, fmt("200 random H across 6 groups, worst law residual %.2e",
                    worst)};
}

Verdict criterion2() {
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    DecouplingGroup g = collective_pauli_group(k);
    ErrorSpace space = make_error_space(single_site_paulis(k));
    if (space.count() != 3 * k)
      return {false, fmt("error space dimension %d != %d", space.count(), 3 * k)};
    CorrectabilityReport rep = is_correctable(g, space);
    if (!rep.correctable) return {false, fmt("K=%d not correctable", k)};
    for (double r : rep.residuals) worst = std::max(worst, r);
  }
  if (worst >= 1e-12)
    return {false, fmt("worst projected residual %.2e >= 1e-12", worst)};
  std::size_t basis_size = centralizer_basis(full_pauli_group(1)).size();
  bool pass = basis_size == 1;
  return {pass, fmt("K=1..3 residuals < 1e-12 (worst %.1e), maximal-averaging "
                    "basis size %zu",
                    worst, basis_size)};
}

Verdict criterion3() {
  Rng rng(1003);
  double worst = 0.0;
  auto identity_residual = [&](const DecouplingGroup& g, const Operator& h,
                               const Operator& p) {
    Operator lhs = project(twist(g, p), Operator(p.adjoint() * h * p));
    Operator rhs = p.adjoint() * project(g, h) * p;
    return hs_norm(lhs - rhs) / std::max(1.0, hs_norm(h));
  };

  DecouplingGroup cp1 = collective_pauli_group(1);
  for (int i = 0; i < 50; ++i) {
    Operator h = random_hermitian(2, rng);
    Operator p = random_unitary(2, rng);
    worst = std::max(worst, identity_residual(cp1, h, p));
  }
  DecouplingGroup cp2 = collective_pauli_group(2);
  ResolveContext ctx{2, 4, nullptr};
  Operator dp = resolve_operator(parse_ctor_string("double_pulse(1,2)"), ctx);
  for (int i = 0; i < 50; ++i) {
    Operator h = random_hermitian(4, rng);
    Operator p = i == 49 ? dp : random_unitary(4, rng);
    worst = std::max(worst, identity_residual(cp2, h, p));
  }
  if (worst > 1e-10)
    return {false, fmt("twisting identity residual %.2e > 1e-10", worst)};

  CorrectabilityReport rep =
      is_correctable(twist(cp2, dp), make_error_space(single_site_paulis(2)));
  if (!rep.correctable)
    return {false, "double-pulse twisted group lost correctability"};
  return {true, fmt("100 (H,P) pairs, worst identity residual %.2e; twisted "
                    "group still corrects the linear error space",
                    worst)};
}

Verdict criterion4() {
  Rng rng(42);
  SweepConfig cfg;
  cfg.group = collective_pauli_group(2);
  cfg.h_total = random_hermitian(4, rng, 1.0);
  for (int k = 0; k <= 8; ++k)
    cfg.cycle_times.push_back(1e-3 * std::pow(10.0, k / 4.0));
  cfg.metric = SweepMetric::avg_residual;
  double s1 = convergence_sweep(cfg).fitted_slope;
  cfg.metric = SweepMetric::cycle_defect;
  double s2 = convergence_sweep(cfg).fitted_slope;
  bool pass = std::fabs(s1 - 1.0) <= 0.2 && std::fabs(s2 - 2.0) <= 0.2;
  return {pass, fmt("avg-residual slope %.4f (want 1.0±0.2), cycle-defect "
                    "slope %.4f (want 2.0±0.2)",
                    s1, s2)};
}

Verdict criterion5() {
  Rng rng(11);
  Operator bz = random_hermitian(4, rng);
  Operator h = tensor(pauli('z'), bz);
  DecouplingGroup ge = embed_group(spin_echo_group(), 4);
  Operator u = cycle_propagator(CycleSpec{ge, 0.5}, h);
  Cplx phase;
  bool pass = equal_up_to_phase(u, identity_op(8), 1e-10, &phase);
  double dev = max_abs(u - phase * identity_op(8));
  return {pass, fmt("cycle propagator vs identity at dt=0.5: max deviation "
                    "%.2e up to phase",
                    dev)};
}

Verdict criterion6() {
  BenchSetup s = make_bench(7, 5.0);
  StateVector psi_free = expm(-kImag * s.total_time * s.h) * s.psi0;
  double infid_free =
      1.0 - uhlmann_fidelity(trace_out_bath(psi_free, 2, 4), s.rho_ideal_s);
  double infid_dd = bench_infidelity(s, 0.01, 0.0);
  double ratio = infid_free / std::max(infid_dd, 1e-300);

  SweepConfig cfg;
  cfg.group = spin_echo_group();
  cfg.h_total = s.h;
  cfg.bath_dim = 4;
  cfg.metric = SweepMetric::final_infidelity;
  cfg.total_time = s.total_time;
  cfg.initial_state = s.psi0;
  for (int k = 0; k <= 7; ++k)
    cfg.cycle_times.push_back(0.005 * std::pow(20.0, k / 7.0));
  double slope = convergence_sweep(cfg).fitted_slope;

  bool pass = ratio >= 100.0 && slope >= 0.8;
  return {pass, fmt("infidelity free %.3g vs decoupled %.3g (ratio %.0f, "
                    "want >= 100); t_c slope %.3f (want >= 0.8)",
                    infid_free, infid_dd, ratio, slope)};
}

Verdict criterion7() {
  Rng rng(5);
  double a = rng.gaussian(), b = rng.gaussian(), c = rng.gaussian();
  Operator h = a * pauli('x') + b * pauli('y') + c * pauli('z');
  h /= hs_norm(h);
  DecouplingGroup g = collective_pauli_group(1);
  const double total_time = 2.0;
  StateVector psi0(2);
  psi0 << 1.0, 0.0;

  std::string report;
  bool pass = true;
  for (Scheme scheme : {Scheme::drift_identity_frame,
                        Scheme::drift_strength_restored}) {
    double target_t =
        scheme == Scheme::drift_identity_frame ? total_time / 4.0 : total_time;
    StateVector target = expm(-kImag * target_t * pauli('x')) * psi0;
    std::vector<double> errs;
    for (double t_c : {0.02, 0.01, 0.005}) {
      long n = std::lround(total_time / t_c);
      SimConfig cfg;
      cfg.spec = CycleSpec{g, t_c / 4.0};
      cfg.n_cycles = n;
      cfg.initial_state = psi0;
      ControlSchedule sched;
      sched.windows.push_back(Window{scheme, pauli('x'), n});
      Trajectory traj = evolve_schedule(cfg, h, sched);
      errs.push_back(state_distance_up_to_phase(traj.final_state(), target));
    }
    for (int i = 0; i + 1 < 3; ++i) {
      double ratio = errs[i] / errs[i + 1];
      if (ratio < 1.6 || ratio > 2.4) pass = false;
      report += fmt("%s%s halving ratio %.3f", report.empty() ? "" : ", ",
                    scheme_name(scheme), ratio);
    }
  }
  return {pass, report + " (want 2.0±0.4)"};
}

Verdict criterion8() {
  LieClosureReport single = lie_closure({pauli('x')});
  LieClosureReport pair = lie_closure({pauli('x'), pauli('z')});
  Operator heis = heisenberg_coupling(2, 1, 2);
  LieClosureReport two_qubit =
      lie_closure({heis, pauli_on(2, 1, 'x'), pauli_on(2, 1, 'z')});
  LieClosureReport protected_only =
      universality_audit(collective_pauli_group(2), {heis}, {});
  bool pass = single.closure_dimension == 1 && !single.universal &&
              pair.closure_dimension == 3 && pair.universal &&
              two_qubit.closure_dimension == 15 && two_qubit.universal &&
              !protected_only.universal;
  return {pass, fmt("closure dims %d/%d/%d (want 1/3/15), universal "
                    "%d/%d/%d, protected-only universal %d (want 0)",
                    single.closure_dimension, pair.closure_dimension,
                    two_qubit.closure_dimension, int(single.universal),
                    int(pair.universal), int(two_qubit.universal),
                    int(protected_only.universal))};
}

Verdict criterion9() {
  Rng rng(1009);
  int stable = 0;
  for (int i = 0; i < 500; ++i) {
    std::string text = testutil::random_program_text(rng, true);
    Program p = parse_program(text);
    std::string s1 = serialize_program(p);
    Program p2 = parse_program(s1);
    if (serialize_program(p2) == s1) ++stable;
  }
  if (stable != 500)
    return {false, fmt("only %d/500 programs round-tripped byte-stably",
                       stable)};

  Rng rng2(1010);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Program p;
    do {
      p = parse_program(testutil::random_program_text(rng2, true));
    } while (p.schedule.windows.empty());
    const int ds = static_cast<int>(p.spec.group.dim());
    const int bath_dim = 2;
    Operator h_total = random_hermitian(ds * bath_dim, rng2, 0.8);
    StateVector psi0 = random_state(ds * bath_dim, rng2);
    long cycles = p.schedule.total_cycles() + 1;

    SimConfig cfg;
    cfg.spec = p.spec;
    cfg.n_cycles = cycles;
    cfg.initial_state = psi0;
    Trajectory traj = evolve_schedule(cfg, h_total, p.schedule);
    StateVector by_events = simulate_events(flatten(p, cycles), h_total,
                                            bath_dim, psi0);
    worst = std::max(worst, state_distance_up_to_phase(traj.final_state(),
                                                       by_events));
  }
  bool pass = worst <= 1e-10;
  return {pass, fmt("500/500 byte-stable round trips; 20 event-list vs "
                    "schedule runs, worst distance %.2e (want <= 1e-10)",
                    worst)};
}

Verdict criterion10() {
  BenchSetup s = make_bench(7, 5.0);
  const double t_c = 0.01, dt = t_c / 2.0;
  PulseWidthSweepConfig cfg;
  cfg.spec = CycleSpec{spin_echo_group(), dt};
  cfg.h_total = s.h;
  cfg.bath_dim = 4;
  cfg.n_cycles = std::lround(s.total_time / t_c);
  for (int k = 0; k <= 8; ++k)
    cfg.widths.push_back(0.04 * dt * std::pow(10.0, k / 8.0));
  cfg.initial_state = s.psi0;
  SweepResult r = pulse_width_sweep(cfg);
  bool pass = std::fabs(r.excess_slope - 1.0) <= 0.3;
  return {pass, fmt("width-induced infidelity slope %.4f over tau in "
                    "[0.04, 0.4]*dt (want 1.0±0.3); zero-width baseline %.3g",
                    r.excess_slope, r.baseline)};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    std::function<Verdict()> run;
    double budget_s;  // 0 = no stated budget
  };
  const std::vector<Entry> entries = {
      {1, criterion1, 10.0}, {2, criterion2, 1.0},  {3, criterion3, 5.0},
      {4, criterion4, 30.0}, {5, criterion5, 0.0},  {6, criterion6, 60.0},
      {7, criterion7, 0.0},  {8, criterion8, 5.0},  {9, criterion9, 0.0},
      {10, criterion10, 0.0},
  };

  bool all_pass = true;
  for (const Entry& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = e.run();
    } catch (const std::exception& ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (e.budget_s > 0.0 && secs >= e.budget_s) {
      v.pass = false;
      v.details += fmt("; runtime %.1fs exceeded the %.0fs budget", secs,
                       e.budget_s);
    }
    std::printf("criterion %d: %s (%s; %.2fs)\n", e.id,
                v.pass ? "PASS" : "FAIL", v.details.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
