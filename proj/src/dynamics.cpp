#include "dlab/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

namespace dlab {

namespace {

const Cplx kI(0.0, 1.0);

int worker_cap() {
  if (const char* s = std::getenv("DECOUPLER_LAB_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Runs body(0..n-1) on up to worker_cap() threads. Each index is processed
// exactly once; the first exception wins and is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int threads = std::min<std::size_t>(worker_cap(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

void check_monotone_axis(const std::vector<double>& x) {
  if (x.size() < 2) return;
  const bool increasing = x[1] > x[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const bool step_up = x[i] > x[i - 1];
    if (x[i] == x[i - 1] || step_up != increasing)
      throw ArgumentError("sweep points must be strictly monotone");
  }
}

bool values_monotone(const std::vector<double>& v) {
  bool non_inc = true, non_dec = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) non_inc = false;
    if (v[i] < v[i - 1]) non_dec = false;
  }
  return non_inc || non_dec;
}

}  // namespace

double BathModel::tau_c() const {
  if (h_bath.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Operator> es(h_bath);
  double norm = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    norm = std::max(norm, std::abs(es.eigenvalues()[i]));
  if (norm == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / norm;
}

Operator BathModel::joint_hamiltonian(const Operator& h_system) const {
  const int ds = static_cast<int>(h_system.rows());
  check(ds);
  Operator h = tensor(h_system, identity_op(bath_dim));
  if (h_bath.size() != 0) h += tensor(identity_op(ds), h_bath);
  for (const auto& [sys, bath] : couplings) h += tensor(sys, bath);
  return h;
}

void BathModel::check(int system_dim) const {
  if (bath_dim < 1) throw ArgumentError("bath dimension must be positive");
  if (h_bath.size() != 0) {
    if (h_bath.rows() != bath_dim || h_bath.cols() != bath_dim)
      throw ArgumentError("bath hamiltonian does not match bath_dim");
    if (!is_hermitian(h_bath, 1e-9))
      throw ArgumentError("bath hamiltonian is not Hermitian");
  }
  for (const auto& [sys, bath] : couplings) {
    if (sys.rows() != system_dim || sys.cols() != system_dim)
      throw ArgumentError("coupling system operator dimension mismatch");
    if (bath.rows() != bath_dim || bath.cols() != bath_dim)
      throw ArgumentError("coupling bath operator dimension mismatch");
    if (!is_hermitian(sys, 1e-9) || !is_hermitian(bath, 1e-9))
      throw ArgumentError("coupling operators must be Hermitian");
    if (std::abs(sys.trace()) > 1e-9 * std::max(1.0, hs_norm(sys)))
      throw ArgumentError("coupling system operator must be traceless");
  }
}

std::vector<Operator> pulse_generators(const std::vector<Operator>& pulses,
                                       double tau) {
  if (tau <= 0.0) throw ArgumentError("pulse width must be positive");
  std::vector<Operator> gens;
  gens.reserve(pulses.size());
  for (const Operator& d : pulses) {
    const int n = static_cast<int>(d.rows());
    Eigen::ComplexEigenSolver<Operator> es(d, false);
    std::vector<double> phases(n);
    for (int k = 0; k < n; ++k) phases[k] = std::arg(es.eigenvalues()[k]);
    std::sort(phases.begin(), phases.end());

    // Widest gap in the eigenphase circle; the branch cut goes to its middle.
    double best_gap = phases.front() + 2.0 * kPi - phases.back();
    double center = 0.5 * (phases.back() + phases.front() + 2.0 * kPi);
    for (int k = 0; k + 1 < n; ++k) {
      double gap = phases[k + 1] - phases[k];
      if (gap > best_gap) {
        best_gap = gap;
        center = 0.5 * (phases[k] + phases[k + 1]);
      }
    }
    if (best_gap <= 2.0 * kBranchGuard)
      throw BranchCutError(
          "pulse eigenphases leave no gap for a log branch; the pulse "
          "generator is ambiguous");
    double alpha = kPi - center;
    Operator rotated = std::exp(kI * alpha) * d;
    Operator log = logm_principal(rotated);
    Operator h = (kI * log + alpha * identity_op(n)) / tau;
    gens.push_back(0.5 * (h + h.adjoint()));
  }
  return gens;
}

namespace {

// drives may be empty (undriven), size 1 (same drive every subinterval), or
// size |G| with empty entries meaning undriven slots.
const Operator* drive_at(const std::vector<Operator>& drives, int j) {
  if (drives.empty()) return nullptr;
  const Operator& d = drives.size() == 1 ? drives[0]
                                         : drives[static_cast<std::size_t>(j)];
  return d.size() == 0 ? nullptr : &d;
}

}  // namespace

Operator cycle_propagator_driven(const CycleSpec& spec, const Operator& h,
                                 const std::vector<Operator>& drives,
                                 double pulse_width,
                                 bool hamiltonian_on_during_pulse) {
  const int n = spec.group.order();
  const int d = spec.group.dim();
  if (n == 0) throw ArgumentError("empty decoupling group");
  if (spec.delta_t <= 0.0) throw ArgumentError("delta_t must be positive");
  if (h.rows() != d || h.cols() != d)
    throw ArgumentError("hamiltonian dimension does not match the group");
  if (!is_hermitian(h, 1e-9))
    throw ArgumentError("ambient hamiltonian is not Hermitian");
  if (!drives.empty() && drives.size() != 1 &&
      drives.size() != static_cast<std::size_t>(n))
    throw ArgumentError("drive list must have one entry per subinterval");
  for (const Operator& dr : drives)
    if (dr.size() != 0 && (dr.rows() != d || dr.cols() != d))
      throw ArgumentError("drive dimension does not match the group");
  if (pulse_width < 0.0) throw ArgumentError("pulse width must be >= 0");
  if (pulse_width > 0.0 && pulse_width >= spec.delta_t)
    throw ArgumentError("pulse width must be smaller than delta_t");

  Operator u = identity_op(d);

  if (pulse_width == 0.0) {
    // Exact instantaneous-pulse product in conjugated form; subinterval 0 is
    // applied first (rightmost factor).
    Operator cached;  // undriven segment, shared across slots
    for (int j = 0; j < n; ++j) {
      const Operator* dr = drive_at(drives, j);
      Operator seg;
      if (dr == nullptr) {
        if (cached.size() == 0) cached = expm(-kI * spec.delta_t * h);
        seg = cached;
      } else {
        seg = expm(-kI * spec.delta_t * (h + *dr));
      }
      const Operator& g = spec.group.elements[static_cast<std::size_t>(j)];
      u = (g.adjoint() * seg * g) * u;
    }
    return u;
  }

  const double tau = pulse_width;
  const double free_t = spec.delta_t - tau;
  std::vector<Operator> pulses = pulses_from_group(spec);
  std::vector<Operator> gens = pulse_generators(pulses, tau);
  Operator cached_free, cached_pulse_extra;
  for (int j = 0; j < n; ++j) {
    const Operator* dr = drive_at(drives, j);
    Operator free_seg;
    if (dr == nullptr) {
      if (cached_free.size() == 0) cached_free = expm(-kI * free_t * h);
      free_seg = cached_free;
    } else {
      free_seg = expm(-kI * free_t * (h + *dr));
    }
    Operator pulse_h = gens[static_cast<std::size_t>(j)];
    if (hamiltonian_on_during_pulse) pulse_h += h;
    Operator pulse_seg = expm(-kI * tau * pulse_h);
    u = pulse_seg * (free_seg * u);
  }
  return u;
}

Operator cycle_propagator(const CycleSpec& spec, const Operator& h,
                          double pulse_width,
                          bool hamiltonian_on_during_pulse) {
  return cycle_propagator_driven(spec, h, {}, pulse_width,
                                 hamiltonian_on_during_pulse);
}

Operator extract_avg_hamiltonian(const Operator& u, double t_c) {
  if (t_c <= 0.0) throw ArgumentError("cycle time must be positive");
  Operator log = logm_principal(u);
  Operator h = (kI * log) / t_c;
  return 0.5 * (h + h.adjoint());
}

const StateVector& Trajectory::final_state() const {
  if (states.empty()) throw ArgumentError("empty trajectory");
  return states.back();
}

namespace {

void guard_norm(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw NumericsError("state norm drifted beyond 1e-8; the propagator is "
                        "not numerically unitary");
}

}  // namespace

Trajectory evolve_schedule(const SimConfig& cfg, const Operator& h_total,
                           const ControlSchedule& schedule) {
  const int ds = cfg.spec.group.dim();
  const long dim = cfg.initial_state.size();
  if (dim <= 0 || dim % ds != 0)
    throw ArgumentError("initial state dimension is not a multiple of the "
                        "system dimension");
  const int bath_dim = static_cast<int>(dim / ds);
  if (h_total.rows() != dim || h_total.cols() != dim)
    throw ArgumentError("joint hamiltonian does not match the state");
  if (std::abs(cfg.initial_state.norm() - 1.0) > 1e-8)
    throw ArgumentError("initial state must be normalized");
  if (cfg.n_cycles < 0) throw ArgumentError("cycle count must be >= 0");
  if (schedule.total_cycles() > cfg.n_cycles)
    throw SyncError("schedule spans " +
                    std::to_string(schedule.total_cycles()) +
                    " cycles but the run has only " +
                    std::to_string(cfg.n_cycles));
  for (const Window& w : schedule.windows) check_window(cfg.spec.group, w);

  const CycleSpec espec{embed_group(cfg.spec.group, bath_dim),
                        cfg.spec.delta_t};
  const int n = espec.group.order();
  const double t_c = espec.cycle_time();

  Trajectory traj;
  traj.system_dim = ds;
  traj.bath_dim = bath_dim;
  traj.cycle_time = t_c;

  StateVector psi = cfg.initial_state;
  long cycle = 0;
  auto record = [&] {
    traj.cycle_indices.push_back(cycle);
    traj.times.push_back(static_cast<double>(cycle) * t_c);
    traj.states.push_back(psi);
  };
  record();

  auto advance = [&](const Operator& u, long count) {
    for (long k = 0; k < count; ++k) {
      psi = u * psi;
      guard_norm(psi);
      ++cycle;
      record();
    }
  };

  for (const Window& w : schedule.windows) {
    std::vector<Operator> drives;
    Operator bracket;  // twisted_slow only
    switch (w.scheme) {
      case Scheme::parallel_slow:
        drives.push_back(embed_system(w.hamiltonian, bath_dim));
        break;
      case Scheme::twisted_slow: {
        const Operator& p = *w.pulse;
        bracket = embed_system(p, bath_dim);
        drives.push_back(
            embed_system(p * w.hamiltonian * p.adjoint(), bath_dim));
        break;
      }
      case Scheme::drift_identity_frame:
        drives.assign(static_cast<std::size_t>(n), Operator());
        drives[0] = embed_system(w.hamiltonian, bath_dim);
        break;
      case Scheme::drift_strength_restored:
        drives.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
          const Operator& g =
              cfg.spec.group.elements[static_cast<std::size_t>(j)];
          drives.push_back(
              embed_system(g * w.hamiltonian * g.adjoint(), bath_dim));
        }
        break;
    }
    Operator u = cycle_propagator_driven(espec, h_total, drives,
                                         cfg.pulse_width,
                                         cfg.hamiltonian_on_during_pulse);
    if (w.scheme == Scheme::twisted_slow) {
      // P right before the window, P^dag synchronized with its last cycle
      // boundary; the boundary sample includes the closing pulse.
      psi = bracket * psi;
      advance(u, w.cycles - 1);
      psi = bracket.adjoint() * (u * psi);
      guard_norm(psi);
      ++cycle;
      record();
    } else {
      advance(u, w.cycles);
    }
  }

  const long leftover = cfg.n_cycles - schedule.total_cycles();
  if (leftover > 0) {
    Operator u = cycle_propagator(espec, h_total, cfg.pulse_width,
                                  cfg.hamiltonian_on_during_pulse);
    advance(u, leftover);
  }
  return traj;
}

Operator trace_out_bath(const StateVector& joint, int system_dim,
                        int bath_dim) {
  if (joint.size() != static_cast<long>(system_dim) * bath_dim)
    throw ArgumentError("state dimension does not factor as system * bath");
  Operator rho = Operator::Zero(system_dim, system_dim);
  for (int i = 0; i < system_dim; ++i)
    for (int j = 0; j < system_dim; ++j) {
      Cplx acc(0.0, 0.0);
      for (int b = 0; b < bath_dim; ++b)
        acc += joint[i * bath_dim + b] * std::conj(joint[j * bath_dim + b]);
      rho(i, j) = acc;
    }
  return rho;
}

double uhlmann_fidelity(const Operator& rho, const Operator& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ArgumentError("density matrix dimension mismatch");
  Operator r = 0.5 * (rho + rho.adjoint());
  Operator s = 0.5 * (sigma + sigma.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> er(r);
  Eigen::VectorXd ev = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Operator sqrt_r =
      er.eigenvectors() * ev.asDiagonal() * er.eigenvectors().adjoint();
  Operator m = sqrt_r * s * sqrt_r;
  Eigen::SelfAdjointEigenSolver<Operator> em(0.5 * (m + m.adjoint()));
  double root_sum = 0.0;
  for (int i = 0; i < em.eigenvalues().size(); ++i)
    root_sum += std::sqrt(std::max(0.0, em.eigenvalues()[i]));
  return root_sum * root_sum;
}

double state_distance_up_to_phase(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw ArgumentError("state dimension mismatch");
  // Align b's global phase to a, then subtract componentwise. The norm-based
  // closed form sqrt(|a|^2 + |b|^2 - 2|<a,b>|) cancels catastrophically and
  // floors near sqrt(2 eps) for nearly identical states.
  Cplx overlap = b.dot(a);
  Cplx z = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap)
                                   : Cplx(1.0, 0.0);
  return (a - z * b).norm();
}

std::vector<double> coherence_metric(const Trajectory& traj,
                                     const Operator& observable) {
  if (observable.rows() != traj.system_dim ||
      observable.cols() != traj.system_dim)
    throw ArgumentError("observable does not act on the system factor");
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const StateVector& psi : traj.states) {
    Operator rho = trace_out_bath(psi, traj.system_dim, traj.bath_dim);
    out.push_back(std::abs((rho * observable).trace()));
  }
  return out;
}

const char* sweep_metric_name(SweepMetric m) {
  switch (m) {
    case SweepMetric::avg_residual: return "avg_residual";
    case SweepMetric::cycle_defect: return "cycle_defect";
    case SweepMetric::final_infidelity: return "final_infidelity";
  }
  return "?";
}

Operator ideal_decoupled_target(const DecouplingGroup& group,
                                const Operator& h_total, int bath_dim,
                                double total_time) {
  DecouplingGroup embedded = embed_group(group, bath_dim);
  return expm(-kI * total_time * project(embedded, h_total));
}

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ArgumentError("slope fit needs at least two points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0) throw ArgumentError("slope fit needs positive abscissae");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::max(y[i], 1e-300));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0.0) throw ArgumentError("slope fit needs distinct abscissae");
  return num / den;
}

namespace {

double infidelity_after(const DecouplingGroup& group, const Operator& u_cycle,
                        const StateVector& psi0, long n_cycles, double t_total,
                        const Operator& h_total, int bath_dim, int system_dim) {
  StateVector psi = psi0;
  for (long k = 0; k < n_cycles; ++k) psi = u_cycle * psi;
  StateVector ideal =
      ideal_decoupled_target(group, h_total, bath_dim, t_total) * psi0;
  Operator rho_sim = trace_out_bath(psi, system_dim, bath_dim);
  Operator rho_ideal = trace_out_bath(ideal, system_dim, bath_dim);
  return std::max(0.0, 1.0 - uhlmann_fidelity(rho_sim, rho_ideal));
}

}  // namespace

SweepResult convergence_sweep(const SweepConfig& cfg) {
  const int ds = cfg.group.dim();
  const long dim = static_cast<long>(ds) * cfg.bath_dim;
  if (cfg.h_total.rows() != dim || cfg.h_total.cols() != dim)
    throw ArgumentError("joint hamiltonian does not match group * bath");
  if (cfg.cycle_times.size() < 3)
    throw ArgumentError("sweep needs at least three cycle-time points");
  check_monotone_axis(cfg.cycle_times);
  auto [lo, hi] = std::minmax_element(cfg.cycle_times.begin(),
                                      cfg.cycle_times.end());
  if (*lo <= 0.0) throw ArgumentError("cycle times must be positive");
  if (*hi / *lo < 10.0 * (1.0 - 1e-12))
    throw ArgumentError("cycle times must span at least one decade");
  if (cfg.metric == SweepMetric::final_infidelity) {
    if (cfg.total_time <= 0.0)
      throw ArgumentError("final_infidelity sweep needs a total time");
    if (cfg.initial_state.size() != dim)
      throw ArgumentError("initial state does not match group * bath");
  }

  const DecouplingGroup embedded = embed_group(cfg.group, cfg.bath_dim);
  const Operator projected = project(embedded, cfg.h_total);
  const int n_g = cfg.group.order();

  std::vector<double> values(cfg.cycle_times.size(), 0.0);
  parallel_for(cfg.cycle_times.size(), [&](std::size_t i) {
    const double t_c = cfg.cycle_times[i];
    const CycleSpec espec{embedded, t_c / n_g};
    Operator u = cycle_propagator(espec, cfg.h_total, cfg.pulse_width,
                                  cfg.hamiltonian_on_during_pulse);
    switch (cfg.metric) {
      case SweepMetric::avg_residual:
        values[i] = hs_norm(extract_avg_hamiltonian(u, t_c) - projected);
        break;
      case SweepMetric::cycle_defect:
        values[i] = hs_norm(u - expm(-kI * t_c * projected));
        break;
      case SweepMetric::final_infidelity: {
        long n_cycles = std::lround(cfg.total_time / t_c);
        if (n_cycles < 1)
          throw ArgumentError("total time shorter than one cycle");
        values[i] = infidelity_after(cfg.group, u, cfg.initial_state, n_cycles,
                                     n_cycles * t_c, cfg.h_total, cfg.bath_dim,
                                     ds);
        break;
      }
    }
  });

  SweepResult result;
  result.variable = "t_c";
  result.seed = cfg.seed;
  for (std::size_t i = 0; i < values.size(); ++i)
    result.rows.push_back(
        {cfg.cycle_times[i], sweep_metric_name(cfg.metric), values[i]});
  result.fitted_slope = fit_loglog_slope(cfg.cycle_times, values);
  result.monotone = values_monotone(values);
  return result;
}

SweepResult pulse_width_sweep(const PulseWidthSweepConfig& cfg) {
  const int ds = cfg.spec.group.dim();
  const long dim = static_cast<long>(ds) * cfg.bath_dim;
  if (cfg.h_total.rows() != dim || cfg.h_total.cols() != dim)
    throw ArgumentError("joint hamiltonian does not match group * bath");
  if (cfg.initial_state.size() != dim)
    throw ArgumentError("initial state does not match group * bath");
  if (cfg.widths.size() < 3)
    throw ArgumentError("sweep needs at least three pulse widths");
  check_monotone_axis(cfg.widths);
  if (cfg.n_cycles < 1) throw ArgumentError("cycle count must be >= 1");
  for (double w : cfg.widths)
    if (w <= 0.0 || w >= cfg.spec.delta_t)
      throw ArgumentError("pulse widths must lie in (0, delta_t)");

  const CycleSpec espec{embed_group(cfg.spec.group, cfg.bath_dim),
                        cfg.spec.delta_t};
  const double t_total = cfg.n_cycles * espec.cycle_time();

  std::vector<double> values(cfg.widths.size(), 0.0);
  parallel_for(cfg.widths.size(), [&](std::size_t i) {
    Operator u = cycle_propagator(espec, cfg.h_total, cfg.widths[i],
                                  cfg.hamiltonian_on_during_pulse);
    values[i] = infidelity_after(cfg.spec.group, u, cfg.initial_state,
                                 cfg.n_cycles, t_total, cfg.h_total,
                                 cfg.bath_dim, ds);
  });

  SweepResult result;
  result.variable = "tau";
  result.seed = cfg.seed;
  for (std::size_t i = 0; i < values.size(); ++i)
    result.rows.push_back(
        {cfg.widths[i], sweep_metric_name(SweepMetric::final_infidelity),
         values[i]});
  result.fitted_slope = fit_loglog_slope(cfg.widths, values);
  result.monotone = values_monotone(values);

  Operator u0 = cycle_propagator(espec, cfg.h_total, 0.0,
                                 cfg.hamiltonian_on_during_pulse);
  result.baseline = infidelity_after(cfg.spec.group, u0, cfg.initial_state,
                                     cfg.n_cycles, t_total, cfg.h_total,
                                     cfg.bath_dim, ds);
  std::vector<double> excess(values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i)
    excess[i] = std::fabs(values[i] - result.baseline);
  result.excess_slope = fit_loglog_slope(cfg.widths, excess);
  return result;
}

}  // namespace dlab
