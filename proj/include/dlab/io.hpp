#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlab/builtins.hpp"
#include "dlab/dynamics.hpp"

namespace dlab {

// Dense operator as JSON: {"dim": d, "re": [[...]], "im": [[...]]} with
// row-major entry lists; "im" may be omitted for real matrices.
Operator operator_from_json(const std::string& text);
std::string operator_to_json(const Operator& op);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Operator load_operator(const std::string& path);

// Dense state as JSON: {"re": [...], "im": [...]}; "im" may be omitted.
StateVector state_from_json(const std::string& text);
StateVector load_state(const std::string& path);

// JSON object {"name": operator, ...} usable as named references in
// pulse programs and ctor strings.
NamedOperatorMap load_named_operators(const std::string& path);

// JSON {"elements": [operator, ...]} or a bare array. The listed elements
// must already form a group up to phases; verification errors propagate.
DecouplingGroup load_group(const std::string& path);

// JSON {"bath_dim": n, "h_bath": operator?, "couplings": [{"system":
// ctor-string or operator, "bath": operator}, ...]}. ctx resolves ctor
// strings on the system factor.
BathModel load_bath(const std::string& path, const ResolveContext& ctx);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

// Fixed CSV shapes ('.' decimals, '\n' line endings, 17 significant digits):
// sweeps "t_c,metric,value", trajectories "cycle_index,time,metric".
std::string format_sweep_csv(const SweepResult& result);
std::string format_trajectory_csv(const Trajectory& traj,
                                  const std::vector<double>& metric_values);

}  // namespace dlab
