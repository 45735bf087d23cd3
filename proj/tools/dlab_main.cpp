// dlab: command-line front end for the decoupling toolkit.
//
// Exit codes: 0 success (for `check`: correctable), 1 runtime failure or a
// negative `check` verdict, 2 invalid input. stdout and output files carry
// data; stderr carries diagnostics.
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlab/builtins.hpp"
#include "dlab/dynamics.hpp"
#include "dlab/io.hpp"
#include "dlab/operator.hpp"
#include "dlab/program.hpp"
#include "dlab/schedfmt.hpp"
#include "dlab/symmetrize.hpp"

namespace {

using nlohmann::json;
using namespace dlab;

constexpr const char* kToolVersion = "0.1.0";

struct Common {
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  std::string out_dir = ".";
  std::string named_ops_path;
  NamedOperatorMap named_ops;

  void load_named() {
    if (!named_ops_path.empty())
      named_ops = load_named_operators(named_ops_path);
  }
  const NamedOperatorMap* named() const {
    return named_ops.empty() ? nullptr : &named_ops;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--seed", c.seed, "RNG seed recorded in the manifest");
  cmd->add_option("--tol", c.tol, "numeric tolerance for membership checks");
  cmd->add_option("--out-dir", c.out_dir,
                  "directory for output files (default .)");
  cmd->add_option("--json", c.named_ops_path,
                  "JSON file of named operators usable in constructors");
}

std::string join_out(const std::string& dir, const std::string& name) {
  if (name.empty()) return name;
  if (name.front() == '/') return name;
  if (dir.empty() || dir == ".") return name;
  return dir + "/" + name;
}

// Splits "a(x,y),b,c(z)" on commas at paren depth zero.
std::vector<std::string> split_ctor_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  for (auto& p : parts) {
    while (!p.empty() && p.front() == ' ') p.erase(p.begin());
    while (!p.empty() && p.back() == ' ') p.pop_back();
  }
  return parts;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Accumulates the inputs that define a run. File arguments contribute their
// contents, so renaming a file does not change the hash but editing it does.
struct ConfigHash {
  std::string blob;

  void add(const std::string& key, const std::string& value) {
    blob += key;
    blob += '=';
    blob += value;
    blob += '\n';
  }
  void add(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    add(key, std::string(buf));
  }
  void add(const std::string& key, std::uint64_t value) {
    add(key, std::to_string(value));
  }
  void add_file(const std::string& key, const std::string& path) {
    if (!path.empty()) add(key, read_text_file(path));
  }
  std::string digest() const { return hex64(fnv1a64(blob)); }
};

void write_manifest(const std::string& csv_path, const std::string& command,
                    const ConfigHash& hash, const Common& common,
                    json extra) {
  json m;
  m["command"] = command;
  m["config_hash"] = hash.digest();
  m["seed"] = common.seed;
  m["tool_version"] = kToolVersion;
  m["timestamp"] = iso_timestamp();
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = *it;
  write_text_file(csv_path + ".manifest.json", m.dump(2) + "\n");
}

// Resolves a group and a list of companion operators that may each need the
// other for ambient sizing: self-sized expressions win, the rest inherit.
struct GroupAndOps {
  DecouplingGroup group;
  std::vector<Operator> ops;
};

ResolveContext ambient_from_dim(Eigen::Index dim, const Common& common) {
  ResolveContext ctx;
  ctx.named_operators = common.named();
  ctx.ambient_dim = static_cast<int>(dim);
  int q = 0;
  for (Eigen::Index d = dim; d > 1 && d % 2 == 0; d /= 2) ++q;
  if ((Eigen::Index{1} << q) == dim) ctx.ambient_qubits = q;
  return ctx;
}

DecouplingGroup resolve_group_flex(const std::string& group_text,
                                   Eigen::Index companion_dim,
                                   const Common& common) {
  ResolveContext bare;
  bare.named_operators = common.named();
  CtorExpr expr = parse_ctor_string(group_text);
  try {
    return resolve_group(expr, bare);
  } catch (const ArgumentError&) {
    if (companion_dim <= 0) throw;
  }
  return resolve_group(expr, ambient_from_dim(companion_dim, common));
}

Operator json_or_ctor_operator(const std::string& ctor_text,
                               const std::string& json_path,
                               const ResolveContext& ctx) {
  if (!json_path.empty()) return load_operator(json_path);
  return resolve_operator(parse_ctor_string(ctor_text), ctx);
}

int run_project(const Common& common, const std::string& group_text,
                const std::string& h_text, const std::string& h_json) {
  DecouplingGroup g;
  Operator h;
  if (!h_json.empty()) {
    h = load_operator(h_json);
    g = resolve_group_flex(group_text, h.rows(), common);
  } else {
    // Try the group self-sized first; fall back to sizing it from H.
    try {
      g = resolve_group_flex(group_text, 0, common);
      ResolveContext ctx = ambient_from_dim(g.dim(), common);
      h = resolve_operator(parse_ctor_string(h_text), ctx);
    } catch (const ArgumentError&) {
      ResolveContext bare;
      bare.named_operators = common.named();
      h = resolve_operator(parse_ctor_string(h_text), bare);
      g = resolve_group_flex(group_text, h.rows(), common);
    }
  }
  if (h.rows() != g.dim())
    throw ArgumentError("hamiltonian dimension does not match the group");
  Operator proj = project(g, h);
  bool member = in_centralizer(g, h, common.tol);
  json out;
  out["in_centralizer"] = member;
  out["projection"] = json::parse(operator_to_json(proj));
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int run_check(const Common& common, const std::string& group_text,
              const std::string& errors_text,
              const std::string& errors_json) {
  std::vector<Operator> gens;
  std::vector<std::string> labels;
  DecouplingGroup g;
  if (!errors_json.empty()) {
    json j = json::parse(read_text_file(errors_json));
    const json& list = j.is_object() && j.contains("generators")
                           ? j["generators"]
                           : j;
    if (!list.is_array())
      throw ArgumentError(errors_json +
                          ": expected an array or {\"generators\": [...]}");
    for (std::size_t i = 0; i < list.size(); ++i) {
      gens.push_back(operator_from_json(list[i].dump()));
      labels.push_back("generator " + std::to_string(i));
    }
    if (gens.empty()) throw ArgumentError("empty error list");
    g = resolve_group_flex(group_text, gens.front().rows(), common);
  } else {
    std::vector<std::string> parts = split_ctor_list(errors_text);
    if (parts.empty()) throw ArgumentError("empty error list");
    auto push_labeled = [&](const std::string& part,
                            const std::vector<Operator>& expanded) {
      for (std::size_t k = 0; k < expanded.size(); ++k) {
        gens.push_back(expanded[k]);
        labels.push_back(expanded.size() == 1
                             ? part
                             : part + "[" + std::to_string(k) + "]");
      }
    };
    // Errors first when self-sized, otherwise size them from the group.
    try {
      ResolveContext bare;
      bare.named_operators = common.named();
      for (const std::string& p : parts)
        push_labeled(p, resolve_error_generators(parse_ctor_string(p), bare));
      g = resolve_group_flex(group_text, gens.front().rows(), common);
    } catch (const ArgumentError&) {
      gens.clear();
      labels.clear();
      g = resolve_group_flex(group_text, 0, common);
      ResolveContext ctx = ambient_from_dim(g.dim(), common);
      for (const std::string& p : parts)
        push_labeled(p, resolve_error_generators(parse_ctor_string(p), ctx));
    }
  }
  ErrorSpace space = make_error_space(gens, common.tol);
  CorrectabilityReport report = is_correctable(g, space, common.tol);
  json out;
  out["correctable"] = report.correctable;
  json table = json::array();
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    json row;
    row["generator"] = labels[i];
    row["residual"] = report.residuals[i];
    table.push_back(row);
  }
  out["residuals"] = table;
  std::printf("%s\n", out.dump(2).c_str());
  return report.correctable ? 0 : 1;
}

// Parses and validates a program file; error diagnostics go to stderr and
// abort with exit 2 (warnings are printed and tolerated).
Program load_program_checked(const std::string& path, const Common& common) {
  Program p = parse_program(read_text_file(path), common.named());
  std::vector<Diagnostic> diags = validate_program(p, common.tol);
  bool fatal = false;
  for (const Diagnostic& d : diags) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(), d.str().c_str());
    if (d.severity == Severity::error) fatal = true;
  }
  if (fatal) throw ArgumentError(path + ": validation failed");
  return p;
}

int run_universality(const Common& common, const std::string& program_path) {
  Program p = load_program_checked(program_path, common);
  std::vector<Operator> slow;
  std::vector<FastControl> fast;
  for (const Window& w : p.schedule.windows) {
    switch (w.scheme) {
      case Scheme::parallel_slow:
        slow.push_back(w.hamiltonian);
        break;
      case Scheme::twisted_slow: {
        FastControl f;
        f.scheme = w.scheme;
        // stored hamiltonian is the twisted-frame drive P^dag A P
        f.op = *w.pulse * w.hamiltonian * w.pulse->adjoint();
        f.pulse = w.pulse;
        fast.push_back(std::move(f));
        break;
      }
      default:
        fast.push_back({w.scheme, w.hamiltonian, std::nullopt});
    }
  }
  LieClosureReport report =
      universality_audit(p.spec.group, slow, fast, common.tol);
  json out;
  out["generator_count"] = report.generator_count;
  out["closure_dimension"] = report.closure_dimension;
  out["traceless_dimension"] = report.traceless_dimension;
  out["contains_identity"] = report.contains_identity;
  out["universal"] = report.universal;
  out["system_dimension"] = static_cast<int>(p.spec.group.dim());
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

struct PhysicsInputs {
  Operator h_system;  // system factor
  BathModel bath;
  Operator h_total;
  StateVector initial_state;
};

PhysicsInputs assemble_physics(const Program& p, const Common& common,
                               const std::string& h_text,
                               const std::string& h_json,
                               const std::string& bath_path,
                               const std::string& state_path) {
  PhysicsInputs in;
  const Eigen::Index d = p.spec.group.dim();
  ResolveContext ctx = ambient_from_dim(d, common);
  if (!h_json.empty() || !h_text.empty())
    in.h_system = json_or_ctor_operator(h_text, h_json, ctx);
  else
    in.h_system = zero_op(d);
  if (in.h_system.rows() != d)
    throw ArgumentError("system hamiltonian dimension does not match group");
  if (!bath_path.empty())
    in.bath = load_bath(bath_path, ctx);
  in.bath.check(static_cast<int>(d));
  in.h_total = in.bath.joint_hamiltonian(in.h_system);
  const Eigen::Index joint = d * in.bath.bath_dim;
  if (!state_path.empty()) {
    in.initial_state = load_state(state_path);
    if (in.initial_state.size() != joint)
      throw ArgumentError("initial state dimension does not match system*bath");
    in.initial_state.normalize();
  } else {
    // uniform superposition on the system, bath ground component
    in.initial_state = StateVector::Zero(joint);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < d; ++i)
      in.initial_state[i * in.bath.bath_dim] = amp;
  }
  return in;
}

int run_simulate(const Common& common, const std::string& program_path,
                 const std::string& h_text, const std::string& h_json,
                 const std::string& bath_path, const std::string& state_path,
                 long cycles, double tau, bool h_off_during_pulse,
                 const std::string& observable_text,
                 const std::string& out_name) {
  Program p = load_program_checked(program_path, common);
  PhysicsInputs in =
      assemble_physics(p, common, h_text, h_json, bath_path, state_path);

  long n_cycles = cycles > 0 ? cycles : p.schedule.total_cycles();
  if (n_cycles < 1)
    throw ArgumentError("no cycles to run: pass --cycles or add windows");

  SimConfig cfg;
  cfg.spec = p.spec;
  cfg.n_cycles = n_cycles;
  cfg.pulse_width = tau;
  cfg.hamiltonian_on_during_pulse = !h_off_during_pulse;
  cfg.initial_state = in.initial_state;
  Trajectory traj = evolve_schedule(cfg, in.h_total, p.schedule);

  ResolveContext ctx = ambient_from_dim(p.spec.group.dim(), common);
  Operator obs = resolve_operator(parse_ctor_string(observable_text), ctx);
  std::vector<double> metric = coherence_metric(traj, obs);

  std::string out_path = join_out(common.out_dir, out_name);
  write_text_file(out_path, format_trajectory_csv(traj, metric));

  ConfigHash hash;
  hash.add("command", std::string("simulate"));
  hash.add_file("program", program_path);
  hash.add("h", h_text);
  hash.add_file("h_json", h_json);
  hash.add_file("bath", bath_path);
  hash.add_file("initial_state", state_path);
  hash.add("cycles", static_cast<std::uint64_t>(n_cycles));
  hash.add("tau", tau);
  hash.add("h_on_during_pulse", std::string(h_off_during_pulse ? "0" : "1"));
  hash.add("observable", observable_text);
  hash.add("tol", common.tol);
  hash.add("seed", common.seed);
  json extra;
  extra["n_cycles"] = n_cycles;
  extra["cycle_time"] = p.spec.cycle_time();
  extra["observable"] = observable_text;
  extra["final_metric"] = metric.back();
  write_manifest(out_path, "simulate", hash, common, extra);
  std::fprintf(stderr, "wrote %s (%zu samples)\n", out_path.c_str(),
               metric.size());
  return 0;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
  std::vector<double> values;
  for (const std::string& part : split_ctor_list(text)) {
    char* end = nullptr;
    double v = std::strtod(part.c_str(), &end);
    if (end == part.c_str() || *end != '\0')
      throw ArgumentError(std::string(what) + ": bad number '" + part + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ArgumentError(std::string(what) + ": empty list");
  return values;
}

int run_sweep(const Common& common, const std::string& program_path,
              const std::string& h_text, const std::string& h_json,
              const std::string& bath_path, const std::string& state_path,
              const std::string& tc_text, const std::string& tau_text,
              const std::string& metric_text, double total_time, long cycles,
              const std::string& out_name) {
  Program p = load_program_checked(program_path, common);
  PhysicsInputs in =
      assemble_physics(p, common, h_text, h_json, bath_path, state_path);
  if (tc_text.empty() == tau_text.empty())
    throw ArgumentError("pass exactly one of --tc or --tau");

  SweepResult result;
  std::string out_path = join_out(common.out_dir, out_name);
  ConfigHash hash;
  hash.add_file("program", program_path);
  hash.add("h", h_text);
  hash.add_file("h_json", h_json);
  hash.add_file("bath", bath_path);
  hash.add_file("initial_state", state_path);
  hash.add("tol", common.tol);
  hash.add("seed", common.seed);

  json extra;
  if (!tc_text.empty()) {
    SweepMetric metric;
    if (metric_text == "avg_residual")
      metric = SweepMetric::avg_residual;
    else if (metric_text == "cycle_defect")
      metric = SweepMetric::cycle_defect;
    else if (metric_text == "final_infidelity")
      metric = SweepMetric::final_infidelity;
    else
      throw ArgumentError(
          "unknown metric '" + metric_text +
          "' (choices: avg_residual, cycle_defect, final_infidelity)");

    SweepConfig cfg;
    cfg.group = p.spec.group;
    cfg.h_total = in.h_total;
    cfg.bath_dim = in.bath.bath_dim;
    cfg.cycle_times = parse_double_list(tc_text, "--tc");
    cfg.metric = metric;
    cfg.initial_state = in.initial_state;
    cfg.seed = common.seed;
    if (metric == SweepMetric::final_infidelity) {
      cfg.total_time = total_time > 0.0
                           ? total_time
                           : p.spec.cycle_time() *
                                 std::max<long>(1, p.schedule.total_cycles());
    }
    result = convergence_sweep(cfg);
    hash.add("command", std::string("sweep"));
    hash.add("tc", tc_text);
    hash.add("metric", metric_text);
    hash.add("total_time", cfg.total_time);
  } else {
    if (!metric_text.empty() && metric_text != "final_infidelity")
      throw ArgumentError("pulse-width sweeps use the final_infidelity metric");
    PulseWidthSweepConfig cfg;
    cfg.spec = p.spec;
    cfg.h_total = in.h_total;
    cfg.bath_dim = in.bath.bath_dim;
    cfg.n_cycles = cycles > 0 ? cycles
                              : std::max<long>(1, p.schedule.total_cycles());
    cfg.widths = parse_double_list(tau_text, "--tau");
    cfg.initial_state = in.initial_state;
    cfg.seed = common.seed;
    result = pulse_width_sweep(cfg);
    hash.add("command", std::string("sweep"));
    hash.add("tau", tau_text);
    hash.add("cycles", static_cast<std::uint64_t>(cfg.n_cycles));
    extra["baseline"] = result.baseline;
    extra["excess_slope"] = result.excess_slope;
  }

  write_text_file(out_path, format_sweep_csv(result));
  extra["fitted_slope"] = result.fitted_slope;
  extra["monotone"] = result.monotone;
  extra["variable"] = result.variable;
  write_manifest(out_path, "sweep", hash, common, extra);
  std::fprintf(stderr, "wrote %s (slope %.6g)\n", out_path.c_str(),
               result.fitted_slope);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bang-bang dynamical decoupling toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Common common;

  // project
  auto* project_cmd = app.add_subcommand(
      "project", "group-average a Hamiltonian and test centralizer membership");
  add_common(project_cmd, common);
  std::string pr_group, pr_h, pr_h_json;
  project_cmd->add_option("--group", pr_group, "decoupling group constructor")
      ->required();
  std::string* pr_h_ptr = &pr_h;
  project_cmd->add_option("--h", pr_h, "hamiltonian constructor");
  project_cmd->add_option("--h-json", pr_h_json, "hamiltonian JSON file");

  // check
  auto* check_cmd = app.add_subcommand(
      "check", "test whether the group averages an error space to zero");
  add_common(check_cmd, common);
  std::string ck_group, ck_errors, ck_errors_json;
  check_cmd->add_option("--group", ck_group, "decoupling group constructor")
      ->required();
  check_cmd->add_option("--errors", ck_errors,
                        "comma-separated error generator constructors");
  check_cmd->add_option("--errors-json", ck_errors_json,
                        "error generator JSON file");

  // universality
  auto* uni_cmd = app.add_subcommand(
      "universality", "Lie-closure audit of a pulse program's control set");
  add_common(uni_cmd, common);
  std::string un_program;
  uni_cmd->add_option("program", un_program, "pulse program (.pprog)")
      ->required();

  // simulate
  auto* sim_cmd =
      app.add_subcommand("simulate", "run a pulse program and write the "
                                     "stroboscopic trajectory CSV");
  add_common(sim_cmd, common);
  std::string sm_program, sm_h, sm_h_json, sm_bath, sm_state, sm_obs, sm_out;
  long sm_cycles = 0;
  double sm_tau = 0.0;
  bool sm_h_off = false;
  sim_cmd->add_option("program", sm_program, "pulse program (.pprog)")
      ->required();
  sim_cmd->add_option("--h", sm_h, "system hamiltonian constructor");
  sim_cmd->add_option("--h-json", sm_h_json, "system hamiltonian JSON file");
  sim_cmd->add_option("--bath", sm_bath, "bath model JSON file");
  sim_cmd->add_option("--initial-state", sm_state,
                      "initial joint state JSON file");
  sim_cmd->add_option("--cycles", sm_cycles,
                      "total cycles (default: schedule total)");
  sim_cmd->add_option("--tau", sm_tau, "pulse width (0 = instantaneous)");
  sim_cmd->add_flag("--h-off-during-pulse", sm_h_off,
                    "suspend the ambient hamiltonian during pulses");
  sim_cmd->add_option("--observable", sm_obs, "coherence observable")
      ->default_val("pauli(1,x)");
  sim_cmd->add_option("--out", sm_out, "trajectory CSV filename")
      ->default_val("trajectory.csv");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "convergence sweep over cycle times or pulse widths");
  add_common(sweep_cmd, common);
  std::string sw_program, sw_h, sw_h_json, sw_bath, sw_state, sw_tc, sw_tau,
      sw_metric, sw_out;
  double sw_total_time = 0.0;
  long sw_cycles = 0;
  sweep_cmd->add_option("program", sw_program, "pulse program (.pprog)")
      ->required();
  sweep_cmd->add_option("--h", sw_h, "system hamiltonian constructor");
  sweep_cmd->add_option("--h-json", sw_h_json, "system hamiltonian JSON file");
  sweep_cmd->add_option("--bath", sw_bath, "bath model JSON file");
  sweep_cmd->add_option("--initial-state", sw_state,
                        "initial joint state JSON file");
  sweep_cmd->add_option("--tc", sw_tc, "comma-separated cycle times");
  sweep_cmd->add_option("--tau", sw_tau, "comma-separated pulse widths");
  sweep_cmd->add_option("--metric", sw_metric,
                        "avg_residual | cycle_defect | final_infidelity");
  sweep_cmd->add_option("--total-time", sw_total_time,
                        "fixed total time for infidelity sweeps");
  sweep_cmd->add_option("--cycles", sw_cycles,
                        "cycle count for pulse-width sweeps");
  sweep_cmd->add_option("--out", sw_out, "sweep CSV filename")
      ->default_val("sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    common.load_named();
    if (project_cmd->parsed()) {
      if (pr_h.empty() == pr_h_json.empty())
        throw ArgumentError("pass exactly one of --h or --h-json");
      (void)pr_h_ptr;
      return run_project(common, pr_group, pr_h, pr_h_json);
    }
    if (check_cmd->parsed()) {
      if (ck_errors.empty() == ck_errors_json.empty())
        throw ArgumentError("pass exactly one of --errors or --errors-json");
      return run_check(common, ck_group, ck_errors, ck_errors_json);
    }
    if (uni_cmd->parsed()) return run_universality(common, un_program);
    if (sim_cmd->parsed())
      return run_simulate(common, sm_program, sm_h, sm_h_json, sm_bath,
                          sm_state, sm_cycles, sm_tau, sm_h_off, sm_obs,
                          sm_out);
    if (sweep_cmd->parsed())
      return run_sweep(common, sw_program, sw_h, sw_h_json, sw_bath, sw_state,
                       sw_tc, sw_tau, sw_metric, sw_total_time, sw_cycles,
                       sw_out);
  } catch (const SyncError& e) {
    std::fprintf(stderr, "dlab: %s\n", e.what());
    return 1;
  } catch (const BoundsError& e) {
    std::fprintf(stderr, "dlab: %s\n", e.what());
    return 1;
  } catch (const NumericsError& e) {
    std::fprintf(stderr, "dlab: %s\n", e.what());
    return 1;
  } catch (const BranchCutError& e) {
    std::fprintf(stderr, "dlab: %s\n", e.what());
    return 1;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "dlab: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "dlab: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dlab: %s\n", e.what());
    return 2;
  }
  return 2;
}
