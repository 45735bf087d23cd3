#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dlab/dynamics.hpp"
#include "dlab/schedfmt.hpp"
#include "testutil.hpp"

using namespace dlab;
using testutil::max_entry_diff;

namespace {

bool has_error(const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags)
    if (d.severity == Severity::error) return true;
  return false;
}

bool mentions(const std::vector<Diagnostic>& diags, const std::string& what) {
  for (const Diagnostic& d : diags)
    if (d.message.find(what) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST_CASE("parse a one-window drift program") {
  Program p = parse_program(
      "group collective_pauli(2); dt 0.01; "
      "window drift_identity B=pauli(1,x) cycles=100;");
  CHECK(p.spec.group.order() == 4);
  CHECK(p.spec.group.dim() == 4);
  CHECK(p.dt == doctest::Approx(0.01));
  CHECK(p.spec.cycle_time() == doctest::Approx(0.04));
  REQUIRE(p.schedule.windows.size() == 1);
  const Window& w = p.schedule.windows[0];
  CHECK(w.scheme == Scheme::drift_identity_frame);
  CHECK(w.cycles == 100);
  CHECK(max_entry_diff(w.hamiltonian, pauli_on(2, 1, 'x')) < 1e-15);
}

TEST_CASE("empty input fails at the very first token") {
  try {
    parse_program("");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.pos.line == 1);
    CHECK(e.pos.column == 1);
    CHECK(std::string(e.what()).find("expected 'group'") != std::string::npos);
  }
}

TEST_CASE("comments and flexible numerals parse") {
  Program p = parse_program(
      "# whole-line comment\n"
      "group spin_echo;  # trailing comment\n"
      "dt 1e-2;\n"
      "window drift_restored B=pauli(1,z) cycles=3;\n");
  CHECK(p.dt == doctest::Approx(0.01));
  CHECK(p.spec.group.order() == 2);
  REQUIRE(p.schedule.windows.size() == 1);
  CHECK(p.schedule.windows[0].scheme == Scheme::drift_strength_restored);

  Program q = parse_program("group spin_echo; dt 2.5E-3;");
  CHECK(q.dt == doctest::Approx(0.0025));
}

TEST_CASE("twisted windows store the conjugated drive") {
  Program p = parse_program(
      "group collective_pauli(2); dt 0.05; "
      "window twisted A=heisenberg(1,2) P=double_pulse(1,2) cycles=2;");
  REQUIRE(p.schedule.windows.size() == 1);
  const Window& w = p.schedule.windows[0];
  REQUIRE(w.pulse.has_value());
  Operator a = heisenberg_coupling(2, 1, 2);
  Operator expected = w.pulse->adjoint() * a * (*w.pulse);
  CHECK(max_entry_diff(w.hamiltonian, expected) < 1e-13);
  CHECK(validate_program(p).empty());
}

TEST_CASE("parse error positions and messages") {
  // Missing dt statement.
  CHECK_THROWS_AS(parse_program("group spin_echo;"), ParseError);
  // Missing semicolon.
  CHECK_THROWS_AS(parse_program("group spin_echo dt 0.1;"), ParseError);
  // Bad scheme keyword.
  try {
    parse_program("group spin_echo; dt 0.1; window sideways cycles=1;");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected scheme") != std::string::npos);
    CHECK(e.pos.line == 1);
  }
  // Duplicate binding.
  try {
    parse_program(
        "group spin_echo; dt 0.1; "
        "window drift_identity B=pauli(1,x) B=pauli(1,z) cycles=1;");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("duplicate binding") !=
          std::string::npos);
  }
  // Missing cycles clause.
  CHECK_THROWS_AS(
      parse_program("group spin_echo; dt 0.1; window slow A=pauli(1,x);"),
      ParseError);
}

TEST_CASE("unknown constructors list the builtin choices") {
  try {
    parse_program("group mystery_group; dt 0.1;");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("collective_pauli") != std::string::npos);
    CHECK(msg.find("spin_echo") != std::string::npos);
  }
}

TEST_CASE("named operators resolve from the context map") {
  NamedOperatorMap named;
  named["my_drive"] = pauli('x');
  Program p = parse_program(
      "group spin_echo; dt 0.1; window slow A=my_drive cycles=1;", &named);
  CHECK(max_entry_diff(p.schedule.windows[0].hamiltonian, pauli('x')) <
        1e-15);
  CHECK_THROWS_AS(
      parse_program("group spin_echo; dt 0.1; window slow A=my_drive "
                    "cycles=1;"),
      ParseError);
}

TEST_CASE("errors statement resolves generator lists") {
  Program p = parse_program("group collective_pauli(2); dt 0.01; "
                            "errors independent(2);");
  CHECK(p.error_generators.size() == 6);
  CHECK(validate_program(p).empty());

  Program two = parse_program("group collective_pauli(1); dt 0.01; "
                              "errors dephasing(1), pauli(1,x);");
  CHECK(two.error_generators.size() == 2);
}

TEST_CASE("serialization is canonical and a fixed point") {
  std::string messy =
      "# comment\n"
      "group   collective_pauli( 2 ) ;\n"
      "dt 0.0100;\n"
      "errors independent(2);\n"
      "window twisted P=double_pulse(1,2) A=heisenberg(1,2) cycles=2;\n";
  Program p = parse_program(messy);
  std::string s1 = serialize_program(p);
  Program p2 = parse_program(s1);
  std::string s2 = serialize_program(p2);
  CHECK(s1 == s2);
  // Canonical form: one statement per line, binding order A,P,B.
  CHECK(s1.find("window twisted A=heisenberg(1,2) P=double_pulse(1,2)") !=
        std::string::npos);
  CHECK(s1.find('#') == std::string::npos);

  // Structural equality after the round trip.
  CHECK(p2.group_expr == p.group_expr);
  CHECK(p2.dt == p.dt);
  REQUIRE(p2.window_stmts.size() == p.window_stmts.size());
  CHECK(p2.window_stmts[0].scheme == p.window_stmts[0].scheme);
  CHECK(p2.window_stmts[0].cycles == p.window_stmts[0].cycles);
  CHECK(max_entry_diff(p2.schedule.windows[0].hamiltonian,
                       p.schedule.windows[0].hamiltonian) < 1e-15);
}

TEST_CASE("serialization round-trips randomized valid programs") {
  Rng rng(1009);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text = testutil::random_program_text(rng, true);
    CAPTURE(text);
    Program p = parse_program(text);
    std::string s1 = serialize_program(p);
    Program p2 = parse_program(s1);
    CHECK(serialize_program(p2) == s1);
    CHECK(p2.dt == p.dt);
    CHECK(p2.group_expr == p.group_expr);
    CHECK(p2.window_stmts.size() == p.window_stmts.size());
    CHECK_FALSE(has_error(validate_program(p)));
  }
}

TEST_CASE("validate flags non-centralizer slow drives") {
  Program p = parse_program(
      "group collective_pauli(2); dt 0.01; "
      "window slow A=pauli(1,z) cycles=1;");
  auto diags = validate_program(p);
  CHECK(has_error(diags));
  CHECK(mentions(diags, "centralizer"));
  CHECK(diags[0].pos.line == 1);

  Program ok = parse_program(
      "group collective_pauli(2); dt 0.01; "
      "window slow A=heisenberg(1,2) cycles=1;");
  CHECK(validate_program(ok).empty());
}

TEST_CASE("validate warns on trivial twists") {
  // P = X(x)X is a group element: legal but steers nothing.
  Program p = parse_program(
      "group collective_pauli(2); dt 0.01; "
      "window twisted A=heisenberg(1,2) P=pauli(1,x) cycles=1;");
  // pauli(1,x) is not in the group; build the true group element instead.
  NamedOperatorMap named;
  named["xx"] = tensor(pauli('x'), pauli('x'));
  Program q = parse_program(
      "group collective_pauli(2); dt 0.01; "
      "window twisted A=heisenberg(1,2) P=xx cycles=1;",
      &named);
  auto diags = validate_program(q);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Severity::warning);
  CHECK(mentions(diags, "trivial"));
  // The non-group pulse produces no warning.
  CHECK_FALSE(mentions(validate_program(p), "trivial"));
}

TEST_CASE("validate flags uncorrectable declared error spaces") {
  Program p = parse_program("group spin_echo; dt 0.01; errors independent(1);");
  auto diags = validate_program(p);
  CHECK(has_error(diags));
  CHECK(mentions(diags, "not correctable"));

  Program ok = parse_program("group spin_echo; dt 0.01; errors dephasing(1);");
  CHECK(validate_program(ok).empty());
}

TEST_CASE("flatten emits the echo event pattern") {
  Program p = parse_program("group spin_echo; dt 1;");
  EventList list = flatten(p, 1);
  REQUIRE(list.events.size() == 4);
  CHECK(list.total_duration == doctest::Approx(2.0));
  CHECK(list.events[0].kind == Event::Kind::segment);
  CHECK(list.events[0].role == "free");
  CHECK(list.events[0].at == doctest::Approx(0.0));
  CHECK(list.events[0].duration == doctest::Approx(1.0));
  CHECK(list.events[1].kind == Event::Kind::pulse);
  CHECK(list.events[1].role == "decouple");
  CHECK(list.events[1].at == doctest::Approx(1.0));
  CHECK(equal_up_to_phase(list.events[1].op, pauli('x')));
  CHECK(list.events[2].kind == Event::Kind::segment);
  CHECK(list.events[2].at == doctest::Approx(1.0));
  CHECK(list.events[3].kind == Event::Kind::pulse);
  CHECK(list.events[3].at == doctest::Approx(2.0));
  CHECK(equal_up_to_phase(list.events[3].op, pauli('x')));
}

TEST_CASE("flatten brackets twisted windows at exact boundaries") {
  Program p = parse_program(
      "group collective_pauli(2); dt 0.05; "
      "window twisted A=heisenberg(1,2) P=double_pulse(1,2) cycles=2; "
      "window slow A=heisenberg(1,2) cycles=1;");
  double t_c = p.spec.cycle_time();
  EventList list = flatten(p, 4);  // one trailing undriven cycle
  REQUIRE_FALSE(list.events.empty());
  CHECK(list.events.front().role == "twist_open");
  CHECK(list.events.front().at == doctest::Approx(0.0));
  int opens = 0, closes = 0;
  double close_at = -1.0;
  std::size_t close_idx = 0;
  for (std::size_t i = 0; i < list.events.size(); ++i) {
    const Event& e = list.events[i];
    if (e.role == "twist_open") ++opens;
    if (e.role == "twist_close") {
      ++closes;
      close_at = e.at;
      close_idx = i;
    }
  }
  CHECK(opens == 1);
  CHECK(closes == 1);
  CHECK(close_at == doctest::Approx(2.0 * t_c));
  // The close is an event of its own, followed by the next window's cycle.
  CHECK(close_idx + 1 < list.events.size());
  CHECK(list.events[close_idx + 1].at == doctest::Approx(2.0 * t_c));
  // Reconstruct P^dag P = identity from the pair.
  Operator open_op = list.events.front().op;
  Operator close_op = list.events[close_idx].op;
  CHECK(max_entry_diff(close_op * open_op, identity_op(4)) < 1e-13);

  // Undriven trailing cycle: the last |G| segments are all free.
  int trailing_free = 0;
  for (std::size_t i = list.events.size(); i-- > 0;) {
    const Event& e = list.events[i];
    if (e.kind != Event::Kind::segment) continue;
    if (e.at < 3.0 * t_c - 1e-12) break;
    CHECK(e.role == "free");
    ++trailing_free;
  }
  CHECK(trailing_free == p.spec.group.order());
}

TEST_CASE("flatten rejects oversubscribed windows") {
  Program p = parse_program(
      "group spin_echo; dt 0.1; window drift_identity B=pauli(1,z) cycles=5;");
  CHECK_THROWS_AS(flatten(p, 4), BoundsError);
  CHECK_NOTHROW(flatten(p, 5));
}

TEST_CASE("per-cycle decoupling pulses multiply to the identity") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    std::string text = testutil::random_program_text(rng, true);
    CAPTURE(text);
    Program p = parse_program(text);
    long cycles = p.schedule.total_cycles() + 1;
    EventList list = flatten(p, cycles);
    const int d = static_cast<int>(p.spec.group.dim());
    Operator prod = identity_op(d);
    int in_cycle = 0;
    for (const Event& e : list.events) {
      if (e.role != "decouple") continue;
      prod = e.op * prod;
      if (++in_cycle == p.spec.group.order()) {
        CHECK(equal_up_to_phase(prod, identity_op(d), 1e-10));
        prod = identity_op(d);
        in_cycle = 0;
      }
    }
    CHECK(in_cycle == 0);
  }
}

TEST_CASE("event simulation matches the schedule integrator") {
  Rng rng(62);
  const char* programs[] = {
      "group spin_echo; dt 0.05; window drift_identity B=pauli(1,y) cycles=3;",
      "group spin_echo; dt 0.05; window slow A=pauli(1,x) cycles=2; "
      "window drift_restored B=pauli(1,z) cycles=2;",
      "group collective_pauli(2); dt 0.04; "
      "window twisted A=heisenberg(1,2) P=double_pulse(1,2) cycles=2;",
      "group collective_pauli(1); dt 0.03; "
      "window drift_restored B=pauli(1,x) cycles=2;",
      "group full_pauli(1); dt 0.02;",
  };
  for (const char* text : programs) {
    CAPTURE(text);
    Program p = parse_program(text);
    REQUIRE_FALSE(has_error(validate_program(p)));
    const int ds = static_cast<int>(p.spec.group.dim());
    const int bath_dim = 2;
    Operator h_total =
        random_hermitian(ds * bath_dim, rng, 0.8);
    StateVector psi0 = random_state(ds * bath_dim, rng);
    long cycles = p.schedule.total_cycles() + 1;

    for (double width : {0.0, 0.01}) {
      SimConfig cfg;
      cfg.spec = p.spec;
      cfg.n_cycles = cycles;
      cfg.pulse_width = width;
      cfg.initial_state = psi0;
      Trajectory traj = evolve_schedule(cfg, h_total, p.schedule);
      EventList list = flatten(p, cycles, width);
      StateVector by_events =
          simulate_events(list, h_total, bath_dim, psi0);
      CHECK(state_distance_up_to_phase(traj.final_state(), by_events) <
            1e-10);
    }
  }
}

TEST_CASE("fuzzed program text never crashes the parser") {
  Rng rng(63);
  const char* charset = "gdwcie(),=;.0123456789ax #\n_";
  const std::size_t charset_len = std::string(charset).size();
  int parsed = 0, rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::string text = testutil::random_program_text(rng, false);
    // Mutate: byte edits, splices, truncations.
    int edits = 1 + rng.uniform_int(5);
    for (int e = 0; e < edits && !text.empty(); ++e) {
      std::size_t pos = rng.uniform_int(static_cast<int>(text.size()));
      switch (rng.uniform_int(3)) {
        case 0:
          text[pos] = charset[rng.uniform_int(static_cast<int>(charset_len))];
          break;
        case 1:
          text.insert(pos, 1,
                      charset[rng.uniform_int(static_cast<int>(charset_len))]);
          break;
        default:
          text.resize(pos);
          break;
      }
    }
    try {
      Program p = parse_program(text);
      validate_program(p);
      ++parsed;
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 200);
  CHECK(rejected > 0);  // the mutations do bite
}

TEST_CASE("diagnostic rendering includes the position") {
  Diagnostic d{Severity::warning, "something odd", {3, 7}};
  std::string s = d.str();
  CHECK(s.find("3:7") != std::string::npos);
  CHECK(s.find("something odd") != std::string::npos);
  CHECK(s.find("warning") != std::string::npos);
}
