#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlab/symmetrize.hpp"

namespace dlab {

// Surface form of a constructor expression: a name plus literal arguments,
// e.g. collective_pauli(2), pauli(1,x), rot(2,y,0.78).
struct CtorExpr {
  std::string name;
  std::vector<std::string> args;

  std::string str() const;  // canonical rendering "name(a,b)"
  bool operator==(const CtorExpr&) const = default;
};

using NamedOperatorMap = std::map<std::string, Operator>;

struct ResolveContext {
  int ambient_qubits = 0;  // 0 = unknown
  int ambient_dim = 0;     // 0 = unknown
  const NamedOperatorMap* named_operators = nullptr;
};

// Builtin groups: identity | identity(K) | spin_echo | collective_pauli(K) |
// full_pauli(K). Unknown names raise ArgumentError listing the choices.
DecouplingGroup resolve_group(const CtorExpr& expr, const ResolveContext& ctx);

// Builtin error-space generator lists: independent(K) (3K single-site
// Paulis), collective(K) (3 sums), dephasing(K) (K sigma_z). A plain
// operator constructor contributes itself as a single generator.
std::vector<Operator> resolve_error_generators(const CtorExpr& expr,
                                               const ResolveContext& ctx);

// Builtin operators: pauli(site,axis) | pauli(K,site,axis) |
// heisenberg(i,j) | rot(site,axis,angle) | double_pulse(i,j), plus named
// references into ctx.named_operators.
Operator resolve_operator(const CtorExpr& expr, const ResolveContext& ctx);

std::vector<std::string> builtin_group_names();
std::vector<std::string> builtin_error_names();
std::vector<std::string> builtin_operator_names();

// Parses "name" or "name(arg,arg,...)" written as a flat string, e.g. from a
// command line. Whitespace around tokens is ignored.
CtorExpr parse_ctor_string(const std::string& text);

// Heisenberg exchange sum_a sigma_a^(i) sigma_a^(j) on an n_qubits register.
Operator heisenberg_coupling(int n_qubits, int site_i, int site_j);

DecouplingGroup collective_pauli_group(int n_qubits);
DecouplingGroup full_pauli_group(int n_qubits);
DecouplingGroup spin_echo_group();

}  // namespace dlab
