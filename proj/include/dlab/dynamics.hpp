#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dlab/program.hpp"

namespace dlab {

// Explicit finite-dimensional environment. The joint Hamiltonian is
//   H = H_S (x) 1 + 1 (x) h_bath + sum_a couplings[a].first (x) .second
// with the system factor always leftmost.
struct BathModel {
  int bath_dim = 1;
  Operator h_bath;  // bath_dim x bath_dim, Hermitian; empty means zero
  std::vector<std::pair<Operator, Operator>> couplings;  // (system, bath)

  // Bath memory-time proxy: 1 / spectral norm of h_bath, infinity when the
  // bath Hamiltonian vanishes.
  double tau_c() const;

  Operator joint_hamiltonian(const Operator& h_system) const;
  void check(int system_dim) const;  // throws ArgumentError on bad shapes
};

struct SimConfig {
  CycleSpec spec;  // system-level group
  long n_cycles = 1;
  double pulse_width = 0.0;  // 0 = instantaneous pulses
  bool hamiltonian_on_during_pulse = true;
  StateVector initial_state;  // unit norm, dimension = system * bath
};

// Hermitian h_j with expm(-i h_j tau) = D_j exactly. The log branch is
// rotated into the widest gap of each pulse's eigenphase spectrum; a gap
// narrower than twice the branch guard is reported as an error.
std::vector<Operator> pulse_generators(const std::vector<Operator>& pulses,
                                       double tau);

// One decoupling cycle under ambient Hamiltonian h (same dimension as the
// group). drives[j], when present, is added to h during subinterval j only.
// pulse_width 0 gives the exact instantaneous-pulse product, subinterval 0
// first; pulse_width > 0 shortens each free segment to delta_t - tau and
// realizes each pulse as a constant-Hamiltonian segment of length tau.
Operator cycle_propagator_driven(const CycleSpec& spec, const Operator& h,
                                 const std::vector<Operator>& drives,
                                 double pulse_width = 0.0,
                                 bool hamiltonian_on_during_pulse = true);

Operator cycle_propagator(const CycleSpec& spec, const Operator& h,
                          double pulse_width = 0.0,
                          bool hamiltonian_on_during_pulse = true);

// Inverts U = expm(-i H_eff t_c). Branch-cut failures indicate t_c is too
// large for the principal log.
Operator extract_avg_hamiltonian(const Operator& u, double t_c);

// Stroboscopic record: states at cycle boundaries, entry 0 the initial state.
struct Trajectory {
  int system_dim = 0;
  int bath_dim = 1;
  double cycle_time = 0.0;
  std::vector<long> cycle_indices;
  std::vector<double> times;
  std::vector<StateVector> states;

  const StateVector& final_state() const;
};

// Runs cfg.n_cycles decoupling cycles with the schedule's windows applied in
// order from cycle 0; cycles past the last window run undriven. Twisted
// windows apply P at the window start and P^dag at its end, both
// instantaneous. h_total acts on system (x) bath.
Trajectory evolve_schedule(const SimConfig& cfg, const Operator& h_total,
                           const ControlSchedule& schedule);

Operator trace_out_bath(const StateVector& joint, int system_dim,
                        int bath_dim);

// Squared-overlap convention: returns (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
// so pure states give |<a|b>|^2.
double uhlmann_fidelity(const Operator& rho, const Operator& sigma);

// min over global phase of ||a - e^{i phi} b|| for unit vectors.
double state_distance_up_to_phase(const StateVector& a, const StateVector& b);

// |trace(rho_S observable)| at each stroboscopic sample.
std::vector<double> coherence_metric(const Trajectory& traj,
                                     const Operator& observable);

enum class SweepMetric {
  avg_residual,     // ||extract_avg_hamiltonian(U) - Pi_G(H)||, one cycle
  cycle_defect,     // ||U(T_c) - expm(-i Pi_G(H) T_c)||, one cycle
  final_infidelity  // 1 - F(rho_S simulated, rho_S ideal) after T = N T_c
};
const char* sweep_metric_name(SweepMetric m);

struct SweepRow {
  double x = 0.0;  // swept variable: cycle time, or pulse width
  std::string metric;
  double value = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;     // in input order
  double fitted_slope = 0.0;      // log-log least squares
  bool monotone = true;
  std::uint64_t seed = 0;
  std::string variable = "t_c";
  // Pulse-width sweeps only: metric value at zero width, and the log-log
  // slope of |value - baseline|, which isolates the width-induced part.
  double baseline = 0.0;
  double excess_slope = 0.0;
};

struct SweepConfig {
  DecouplingGroup group;  // system-level
  Operator h_total;       // joint, dimension group.dim() * bath_dim
  int bath_dim = 1;
  std::vector<double> cycle_times;  // >= 3 points spanning >= one decade
  SweepMetric metric = SweepMetric::avg_residual;
  double total_time = 0.0;    // final_infidelity only: N = round(T / T_c)
  StateVector initial_state;  // final_infidelity only
  double pulse_width = 0.0;
  bool hamiltonian_on_during_pulse = true;
  std::uint64_t seed = 0;  // recorded in the result, not consumed here
};

// One row per cycle time; points are independent and distributed across
// worker threads (capped by DECOUPLER_LAB_THREADS), merged in input order.
SweepResult convergence_sweep(const SweepConfig& cfg);

struct PulseWidthSweepConfig {
  CycleSpec spec;    // fixed cycle time
  Operator h_total;  // joint
  int bath_dim = 1;
  long n_cycles = 1;
  std::vector<double> widths;  // all > 0, < delta_t
  StateVector initial_state;
  bool hamiltonian_on_during_pulse = true;
  std::uint64_t seed = 0;
};

// Final-infidelity sweep over pulse width at fixed cycle time.
SweepResult pulse_width_sweep(const PulseWidthSweepConfig& cfg);

// Unitary the decoupler aims for: expm(-i Pi_{G(x)1}(h_total) T).
Operator ideal_decoupled_target(const DecouplingGroup& group,
                                const Operator& h_total, int bath_dim,
                                double total_time);

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

}  // namespace dlab
