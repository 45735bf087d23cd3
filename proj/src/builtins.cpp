#include "dlab/builtins.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace dlab {

std::string CtorExpr::str() const {
  std::string out = name;
  if (!args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      out += args[i];
    }
    out += ')';
  }
  return out;
}

namespace {

[[noreturn]] void bad_ctor(const CtorExpr& expr, const std::string& why) {
  throw ArgumentError("in " + expr.str() + ": " + why);
}

void need_args(const CtorExpr& expr, std::size_t n) {
  if (expr.args.size() != n)
    bad_ctor(expr, "expected " + std::to_string(n) + " argument(s), got " +
                       std::to_string(expr.args.size()));
}

long arg_int(const CtorExpr& expr, std::size_t i) {
  const std::string& s = expr.args[i];
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    bad_ctor(expr, "argument " + std::to_string(i + 1) + " ('" + s +
                       "') is not an integer");
  return v;
}

double arg_real(const CtorExpr& expr, std::size_t i) {
  const std::string& s = expr.args[i];
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    bad_ctor(expr, "argument " + std::to_string(i + 1) + " ('" + s +
                       "') is not a number");
  return v;
}

char arg_axis(const CtorExpr& expr, std::size_t i) {
  const std::string& s = expr.args[i];
  if (s == "x" || s == "y" || s == "z") return s[0];
  bad_ctor(expr, "argument " + std::to_string(i + 1) + " ('" + s +
                     "') is not an axis (x, y, or z)");
}

int arg_qubits(const CtorExpr& expr, std::size_t i) {
  long k = arg_int(expr, i);
  if (k < 1 || k > 8)
    bad_ctor(expr, "qubit count must be between 1 and 8, got " +
                       std::to_string(k));
  return static_cast<int>(k);
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

// Register size for site-indexed constructors: the ambient context wins,
// otherwise the smallest register containing all named sites.
int register_size(const ResolveContext& ctx, const CtorExpr& expr,
                  int min_sites) {
  int k = ctx.ambient_qubits;
  if (k == 0) k = min_sites;
  if (min_sites > k)
    bad_ctor(expr, "site " + std::to_string(min_sites) +
                       " exceeds the ambient register of " +
                       std::to_string(k) + " qubit(s)");
  return k;
}

}  // namespace

std::vector<std::string> builtin_group_names() {
  return {"identity", "identity(K)", "spin_echo", "collective_pauli(K)",
          "full_pauli(K)"};
}

std::vector<std::string> builtin_error_names() {
  return {"independent(K)", "collective(K)", "dephasing(K)"};
}

std::vector<std::string> builtin_operator_names() {
  return {"pauli(site,axis)", "pauli(K,site,axis)", "heisenberg(i,j)",
          "rot(site,axis,angle)", "double_pulse(i,j)"};
}

DecouplingGroup spin_echo_group() {
  DecouplingGroup g;
  g.elements = {identity_op(2), pauli('x')};
  return g;
}

DecouplingGroup collective_pauli_group(int n_qubits) {
  Operator x = identity_op(1), y = x, z = x;
  for (int q = 0; q < n_qubits; ++q) {
    x = tensor(x, pauli('x'));
    y = tensor(y, pauli('y'));
    z = tensor(z, pauli('z'));
  }
  DecouplingGroup g;
  g.elements = {identity_op(1L << n_qubits), x, y, z};
  return g;
}

DecouplingGroup full_pauli_group(int n_qubits) {
  const long count = 1L << (2 * n_qubits);
  DecouplingGroup g;
  g.elements.reserve(count);
  for (long idx = 0; idx < count; ++idx) {
    Operator op = identity_op(1);
    // Base-4 digits, site 1 the most significant: 0=I, 1=X, 2=Y, 3=Z.
    for (int q = n_qubits - 1; q >= 0; --q) {
      long digit = (idx >> (2 * q)) & 3;
      static const char axes[4] = {'i', 'x', 'y', 'z'};
      op = tensor(op, digit == 0 ? identity_op(2) : pauli(axes[digit]));
    }
    g.elements.push_back(op);
  }
  return g;
}

DecouplingGroup resolve_group(const CtorExpr& expr, const ResolveContext& ctx) {
  if (expr.name == "identity") {
    int dim = 0;
    if (expr.args.empty()) {
      dim = ctx.ambient_dim;
      if (dim == 0)
        bad_ctor(expr,
                 "ambient dimension unknown; use identity(K) with an "
                 "explicit qubit count");
    } else {
      need_args(expr, 1);
      dim = 1 << arg_qubits(expr, 0);
    }
    DecouplingGroup g;
    g.elements = {identity_op(dim)};
    return g;
  }
  if (expr.name == "spin_echo") {
    need_args(expr, 0);
    return spin_echo_group();
  }
  if (expr.name == "collective_pauli") {
    need_args(expr, 1);
    return collective_pauli_group(arg_qubits(expr, 0));
  }
  if (expr.name == "full_pauli") {
    need_args(expr, 1);
    int k = arg_qubits(expr, 0);
    if (k > 4)
      bad_ctor(expr, "full_pauli supports at most 4 qubits (group order 256)");
    return full_pauli_group(k);
  }
  throw ArgumentError("unknown group '" + expr.str() +
                      "'; available groups: " + join(builtin_group_names()));
}

std::vector<Operator> resolve_error_generators(const CtorExpr& expr,
                                               const ResolveContext& ctx) {
  if (expr.name == "independent") {
    need_args(expr, 1);
    int k = arg_qubits(expr, 0);
    std::vector<Operator> gens;
    for (int site = 1; site <= k; ++site)
      for (char axis : {'x', 'y', 'z'})
        gens.push_back(pauli_on(k, site, axis));
    return gens;
  }
  if (expr.name == "collective") {
    need_args(expr, 1);
    int k = arg_qubits(expr, 0);
    std::vector<Operator> gens;
    for (char axis : {'x', 'y', 'z'}) {
      Operator sum = zero_op(1L << k);
      for (int site = 1; site <= k; ++site) sum += pauli_on(k, site, axis);
      gens.push_back(sum);
    }
    return gens;
  }
  if (expr.name == "dephasing") {
    need_args(expr, 1);
    int k = arg_qubits(expr, 0);
    std::vector<Operator> gens;
    for (int site = 1; site <= k; ++site)
      gens.push_back(pauli_on(k, site, 'z'));
    return gens;
  }
  // Any single-operator constructor doubles as a one-generator space.
  return {resolve_operator(expr, ctx)};
}

Operator resolve_operator(const CtorExpr& expr, const ResolveContext& ctx) {
  if (expr.name == "pauli") {
    if (expr.args.size() == 2) {
      int site = static_cast<int>(arg_int(expr, 0));
      char axis = arg_axis(expr, 1);
      int k = register_size(ctx, expr, site);
      return pauli_on(k, site, axis);
    }
    need_args(expr, 3);
    int k = arg_qubits(expr, 0);
    int site = static_cast<int>(arg_int(expr, 1));
    char axis = arg_axis(expr, 2);
    return pauli_on(k, site, axis);
  }
  if (expr.name == "heisenberg") {
    need_args(expr, 2);
    int i = static_cast<int>(arg_int(expr, 0));
    int j = static_cast<int>(arg_int(expr, 1));
    int k = register_size(ctx, expr, std::max(i, j));
    return heisenberg_coupling(k, i, j);
  }
  if (expr.name == "rot") {
    need_args(expr, 3);
    int site = static_cast<int>(arg_int(expr, 0));
    char axis = arg_axis(expr, 1);
    double angle = arg_real(expr, 2);
    int k = register_size(ctx, expr, site);
    return expm(Cplx(0.0, -0.5 * angle) * pauli_on(k, site, axis));
  }
  if (expr.name == "double_pulse") {
    need_args(expr, 2);
    int i = static_cast<int>(arg_int(expr, 0));
    int j = static_cast<int>(arg_int(expr, 1));
    int k = register_size(ctx, expr, std::max(i, j));
    Operator first = expm(Cplx(0.0, -kPi / 4.0) * pauli_on(k, i, 'y'));
    Operator second = expm(Cplx(0.0, -kPi / 4.0) * pauli_on(k, j, 'x'));
    return first * second;
  }
  if (expr.args.empty() && ctx.named_operators) {
    auto it = ctx.named_operators->find(expr.name);
    if (it != ctx.named_operators->end()) return it->second;
  }
  throw ArgumentError("unknown operator '" + expr.str() +
                      "'; available operators: " +
                      join(builtin_operator_names()) +
                      ", or a name bound to an inline JSON operator");
}

CtorExpr parse_ctor_string(const std::string& text) {
  auto trim = [](std::string s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return std::string();
    return s.substr(a, b - a + 1);
  };
  std::string s = trim(text);
  if (s.empty()) throw ArgumentError("empty constructor expression");
  CtorExpr e;
  std::size_t open = s.find('(');
  if (open == std::string::npos) {
    e.name = s;
  } else {
    if (s.back() != ')')
      throw ArgumentError("missing ')' in constructor '" + text + "'");
    e.name = trim(s.substr(0, open));
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    std::size_t start = 0;
    while (start <= inner.size()) {
      std::size_t comma = inner.find(',', start);
      std::string arg = trim(inner.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start));
      if (arg.empty())
        throw ArgumentError("empty argument in constructor '" + text + "'");
      e.args.push_back(arg);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (e.name.empty())
    throw ArgumentError("missing name in constructor '" + text + "'");
  for (char c : e.name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw ArgumentError("bad character in constructor name '" + e.name +
                          "'");
  return e;
}

Operator heisenberg_coupling(int n_qubits, int site_i, int site_j) {
  if (site_i == site_j)
    throw ArgumentError("heisenberg coupling needs two distinct sites");
  Operator sum = zero_op(1L << n_qubits);
  for (char axis : {'x', 'y', 'z'})
    sum += pauli_on(n_qubits, site_i, axis) * pauli_on(n_qubits, site_j, axis);
  return sum;
}

}  // namespace dlab
