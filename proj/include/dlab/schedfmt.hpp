#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dlab/builtins.hpp"
#include "dlab/program.hpp"

namespace dlab {

struct SourcePos {
  int line = 1;
  int column = 1;
};

// Syntax or resolution failure with an exact source position. what() is
// prefixed "line:column: ".
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, SourcePos p)
      : Error(std::to_string(p.line) + ":" + std::to_string(p.column) + ": " +
              msg),
        pos(p) {}
  SourcePos pos;
};

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string message;
  SourcePos pos;

  std::string str() const;
};

// Surface form of one window statement, kept verbatim for serialization.
struct WindowStmt {
  Scheme scheme = Scheme::parallel_slow;
  std::vector<std::pair<std::string, CtorExpr>> bindings;  // source order
  long cycles = 1;
  SourcePos pos;
};

// A parsed pulse program: the surface statements plus the resolved
// operators. Windows store the effective-frame Hamiltonian (for twisted
// windows the source binding A is the lab-frame drive and the stored
// operator is P^dag A P).
struct Program {
  CtorExpr group_expr;
  double dt = 0.0;
  std::vector<CtorExpr> error_exprs;
  std::vector<WindowStmt> window_stmts;
  SourcePos group_pos, dt_pos, errors_pos;

  CycleSpec spec;
  ControlSchedule schedule;
  std::vector<Operator> error_generators;
};

// Grammar:
//   program    := group_stmt dt_stmt errors_stmt? window_stmt*
//   group_stmt := "group" ctor ";"
//   dt_stmt    := "dt" NUMBER ";"
//   errors_stmt:= "errors" ctor ("," ctor)* ";"
//   window_stmt:= "window" scheme_kw binding* "cycles" "=" INT ";"
//   scheme_kw  := "slow" | "twisted" | "drift_identity" | "drift_restored"
//   binding    := IDENT "=" ctor
//   ctor       := IDENT "(" arg ("," arg)* ")" | IDENT
// "#" starts a line comment. Bindings: slow takes A=, twisted takes A= and
// P=, the drift schemes take B=. Unknown constructor names fail here with
// the builtin list; centralizer and correctability checks are deferred to
// validate_program.
Program parse_program(const std::string& source,
                      const std::map<std::string, Operator>* named_operators =
                          nullptr);

// Canonical text: one statement per line, fixed binding order, floats with
// 17 significant digits. parse(serialize(p)) == p structurally and
// serialize is a fixed point after one round.
std::string serialize_program(const Program& p);

// Semantic checks; empty result means the program is runnable. Errors:
// non-positive dt, cycle counts < 1, slow/twisted Hamiltonians outside the
// required centralizer, non-unitary twist pulses, declared error space not
// correctable. Warning: twist pulse inside Z(G) or the group itself (the
// twist steers nothing).
std::vector<Diagnostic> validate_program(const Program& p,
                                         double tol = kDefaultTol);

struct Event {
  enum class Kind { pulse, segment };
  Kind kind = Kind::segment;
  double at = 0.0;
  Operator op;  // pulse: unitary; segment: drive contribution (zero = free)
  double duration = 0.0;  // segments only
  // "decouple" | "twist_open" | "twist_close" pulses,
  // "free" | "driven" segments
  std::string role;
};

// Flat timed realization of a program. Segment operators hold only the
// window's drive contribution; the ambient Hamiltonian is supplied at
// simulation time. pulse_width > 0 shortens segments to delta_t - tau and
// stamps each decoupling pulse's start time tau early; twist brackets stay
// instantaneous.
struct EventList {
  std::vector<Event> events;
  double total_duration = 0.0;
  double pulse_width = 0.0;
};

// Windows fill cycles from 0; cycles past the last window run undriven.
// Throws BoundsError when the windows need more than n_cycles_total.
EventList flatten(const Program& p, long n_cycles_total,
                  double pulse_width = 0.0);

// Event-by-event reference simulation: segments evolve under
// h_total + embed(drive), decoupling pulses act instantaneously or, when
// the list carries a pulse width, as constant-generator segments. Matches
// evolve_schedule on the same program.
StateVector simulate_events(const EventList& list, const Operator& h_total,
                            int bath_dim, StateVector psi,
                            bool hamiltonian_on_during_pulse = true);

}  // namespace dlab
