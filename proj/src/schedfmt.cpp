#include "dlab/schedfmt.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "dlab/dynamics.hpp"

namespace dlab {

std::string Diagnostic::str() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
         (severity == Severity::error ? "error: " : "warning: ") + message;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Tok { ident, number, lparen, rparen, comma, semi, eq, end };

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::number: return "number";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::semi: return "';'";
    case Tok::eq: return "'='";
    case Tok::end: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::end;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_blank();
    Token t;
    t.pos = {line_, col_};
    if (i_ >= src_.size()) {
      t.kind = Tok::end;
      return t;
    }
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
              src_[i_] == '_'))
        t.text += take();
      t.kind = Tok::ident;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        ((c == '-' || c == '+') && i_ + 1 < src_.size() &&
         (std::isdigit(static_cast<unsigned char>(src_[i_ + 1])) ||
          src_[i_ + 1] == '.'))) {
      t.text = lex_number();
      t.kind = Tok::number;
      return t;
    }
    switch (c) {
      case '(': t.kind = Tok::lparen; break;
      case ')': t.kind = Tok::rparen; break;
      case ',': t.kind = Tok::comma; break;
      case ';': t.kind = Tok::semi; break;
      case '=': t.kind = Tok::eq; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         t.pos);
    }
    t.text = take();
    return t;
  }

 private:
  char take() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_blank() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        return;
      }
    }
  }

  std::string lex_number() {
    std::string out;
    auto digits = [&] {
      while (i_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[i_])))
        out += take();
    };
    if (i_ < src_.size() && (src_[i_] == '-' || src_[i_] == '+'))
      out += take();
    digits();
    if (i_ < src_.size() && src_[i_] == '.') {
      out += take();
      digits();
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      out += take();
      if (i_ < src_.size() && (src_[i_] == '-' || src_[i_] == '+'))
        out += take();
      digits();
    }
    return out;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& src,
         const std::map<std::string, Operator>* named)
      : lexer_(src) {
    ctx_.named_operators = named;
    cur_ = lexer_.next();
  }

  Program run() {
    Program p;
    p.group_pos = cur_.pos;
    expect_keyword("group");
    CtorExpr gexpr = parse_ctor();
    p.group_expr = gexpr;
    p.spec.group = resolve_or_rethrow<DecouplingGroup>(
        [&] { return resolve_group(gexpr, ctx_); }, p.group_pos);
    set_ambient(p.spec.group.dim());
    expect(Tok::semi);

    p.dt_pos = cur_.pos;
    expect_keyword("dt");
    Token num = expect(Tok::number);
    p.dt = std::strtod(num.text.c_str(), nullptr);
    p.spec.delta_t = p.dt;
    expect(Tok::semi);

    if (cur_.kind == Tok::ident && cur_.text == "errors") {
      p.errors_pos = cur_.pos;
      advance();
      for (;;) {
        SourcePos pos = cur_.pos;
        CtorExpr e = parse_ctor();
        p.error_exprs.push_back(e);
        auto gens = resolve_or_rethrow<std::vector<Operator>>(
            [&] { return resolve_error_generators(e, ctx_); }, pos);
        for (Operator& g : gens) {
          check_dim(g, pos);
          p.error_generators.push_back(std::move(g));
        }
        if (cur_.kind != Tok::comma) break;
        advance();
      }
      expect(Tok::semi);
    }

    while (cur_.kind == Tok::ident && cur_.text == "window")
      parse_window(p);
    if (cur_.kind != Tok::end)
      throw ParseError("expected 'window' or end of input, got " +
                           describe(cur_),
                       cur_.pos);
    return p;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  std::string describe(const Token& t) const {
    if (t.kind == Tok::end) return "end of input";
    return "'" + t.text + "'";
  }

  Token expect(Tok kind) {
    if (cur_.kind != kind)
      throw ParseError(std::string("expected ") + tok_name(kind) + ", got " +
                           describe(cur_),
                       cur_.pos);
    Token t = cur_;
    advance();
    return t;
  }

  void expect_keyword(const std::string& kw) {
    if (cur_.kind != Tok::ident || cur_.text != kw)
      throw ParseError("expected '" + kw + "', got " + describe(cur_),
                       cur_.pos);
    advance();
  }

  template <typename T, typename F>
  T resolve_or_rethrow(F f, SourcePos pos) {
    try {
      return f();
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), pos);
    }
  }

  void set_ambient(int dim) {
    ctx_.ambient_dim = dim;
    int k = 0, d = dim;
    while (d > 1 && d % 2 == 0) {
      d /= 2;
      ++k;
    }
    ctx_.ambient_qubits = (d == 1) ? k : 0;
  }

  void check_dim(const Operator& op, SourcePos pos) {
    if (op.rows() != ctx_.ambient_dim || op.cols() != ctx_.ambient_dim)
      throw ParseError("operator is " + std::to_string(op.rows()) + "x" +
                           std::to_string(op.cols()) +
                           " but the group acts on dimension " +
                           std::to_string(ctx_.ambient_dim),
                       pos);
  }

  CtorExpr parse_ctor() {
    Token name = expect(Tok::ident);
    CtorExpr e;
    e.name = name.text;
    if (cur_.kind == Tok::lparen) {
      advance();
      for (;;) {
        if (cur_.kind != Tok::ident && cur_.kind != Tok::number)
          throw ParseError("expected argument (number or identifier), got " +
                               describe(cur_),
                           cur_.pos);
        e.args.push_back(cur_.text);
        advance();
        if (cur_.kind == Tok::comma) {
          advance();
          continue;
        }
        expect(Tok::rparen);
        break;
      }
    }
    return e;
  }

  void parse_window(Program& p) {
    WindowStmt stmt;
    stmt.pos = cur_.pos;
    advance();  // "window"

    Token kw = expect(Tok::ident);
    if (kw.text == "slow") {
      stmt.scheme = Scheme::parallel_slow;
    } else if (kw.text == "twisted") {
      stmt.scheme = Scheme::twisted_slow;
    } else if (kw.text == "drift_identity") {
      stmt.scheme = Scheme::drift_identity_frame;
    } else if (kw.text == "drift_restored") {
      stmt.scheme = Scheme::drift_strength_restored;
    } else {
      throw ParseError("expected scheme (slow, twisted, drift_identity, "
                       "drift_restored), got '" +
                           kw.text + "'",
                       kw.pos);
    }

    std::map<std::string, std::pair<CtorExpr, SourcePos>> bound;
    while (cur_.kind == Tok::ident && cur_.text != "cycles") {
      Token key = expect(Tok::ident);
      expect(Tok::eq);
      SourcePos vpos = cur_.pos;
      CtorExpr value = parse_ctor();
      if (bound.count(key.text))
        throw ParseError("duplicate binding '" + key.text + "='", key.pos);
      bound.emplace(key.text, std::make_pair(value, vpos));
      stmt.bindings.emplace_back(key.text, value);
    }
    expect_keyword("cycles");
    expect(Tok::eq);
    Token count = expect(Tok::number);
    char* end = nullptr;
    stmt.cycles = std::strtol(count.text.c_str(), &end, 10);
    if (end == count.text.c_str() || *end != '\0')
      throw ParseError("cycles must be an integer, got '" + count.text + "'",
                       count.pos);
    expect(Tok::semi);

    auto take_binding = [&](const std::string& key) {
      auto it = bound.find(key);
      if (it == bound.end())
        throw ParseError("window scheme '" + kw.text + "' needs binding " +
                             key + "=...",
                         stmt.pos);
      auto v = it->second;
      bound.erase(it);
      return v;
    };

    Window w;
    w.scheme = stmt.scheme;
    w.cycles = stmt.cycles;
    switch (stmt.scheme) {
      case Scheme::parallel_slow: {
        auto [expr, pos] = take_binding("A");
        Operator a = resolve_or_rethrow<Operator>(
            [&] { return resolve_operator(expr, ctx_); }, pos);
        check_dim(a, pos);
        w.hamiltonian = a;
        break;
      }
      case Scheme::twisted_slow: {
        auto [aexpr, apos] = take_binding("A");
        auto [pexpr, ppos] = take_binding("P");
        Operator a = resolve_or_rethrow<Operator>(
            [&] { return resolve_operator(aexpr, ctx_); }, apos);
        Operator pulse = resolve_or_rethrow<Operator>(
            [&] { return resolve_operator(pexpr, ctx_); }, ppos);
        check_dim(a, apos);
        check_dim(pulse, ppos);
        // The source binding is the lab-frame drive; the stored window
        // Hamiltonian lives in the twisted frame.
        w.hamiltonian = pulse.adjoint() * a * pulse;
        w.pulse = pulse;
        break;
      }
      case Scheme::drift_identity_frame:
      case Scheme::drift_strength_restored: {
        auto [expr, pos] = take_binding("B");
        Operator b = resolve_or_rethrow<Operator>(
            [&] { return resolve_operator(expr, ctx_); }, pos);
        check_dim(b, pos);
        w.hamiltonian = b;
        break;
      }
    }
    if (!bound.empty())
      throw ParseError("window scheme '" + kw.text +
                           "' does not take binding '" +
                           bound.begin()->first + "='",
                       bound.begin()->second.second);

    p.window_stmts.push_back(std::move(stmt));
    p.schedule.windows.push_back(std::move(w));
  }

  Lexer lexer_;
  Token cur_;
  ResolveContext ctx_;
};

}  // namespace

Program parse_program(const std::string& source,
                      const std::map<std::string, Operator>* named_operators) {
  Parser parser(source, named_operators);
  return parser.run();
}

namespace {

const CtorExpr* find_binding(const WindowStmt& stmt, const std::string& key) {
  for (const auto& [k, v] : stmt.bindings)
    if (k == key) return &v;
  return nullptr;
}

}  // namespace

std::string serialize_program(const Program& p) {
  std::string out = "group " + p.group_expr.str() + ";\n";
  out += "dt " + g17(p.dt) + ";\n";
  if (!p.error_exprs.empty()) {
    out += "errors ";
    for (std::size_t i = 0; i < p.error_exprs.size(); ++i) {
      if (i) out += ", ";
      out += p.error_exprs[i].str();
    }
    out += ";\n";
  }
  for (const WindowStmt& stmt : p.window_stmts) {
    out += "window ";
    out += scheme_name(stmt.scheme);
    static const char* const kKeyOrder[] = {"A", "P", "B"};
    for (const char* key : kKeyOrder)
      if (const CtorExpr* e = find_binding(stmt, key))
        out += std::string(" ") + key + "=" + e->str();
    out += " cycles=" + std::to_string(stmt.cycles) + ";\n";
  }
  return out;
}

std::vector<Diagnostic> validate_program(const Program& p, double tol) {
  std::vector<Diagnostic> diags;
  auto error = [&](const std::string& msg, SourcePos pos) {
    diags.push_back({Severity::error, msg, pos});
  };
  auto warning = [&](const std::string& msg, SourcePos pos) {
    diags.push_back({Severity::warning, msg, pos});
  };

  if (!(p.dt > 0.0)) error("dt must be positive", p.dt_pos);

  const DecouplingGroup& g = p.spec.group;
  for (std::size_t i = 0; i < p.schedule.windows.size(); ++i) {
    const Window& w = p.schedule.windows[i];
    const WindowStmt& stmt = p.window_stmts[i];
    if (w.cycles < 1)
      error("window must span at least one cycle", stmt.pos);
    if (!is_hermitian(w.hamiltonian, 1e-9))
      error("window hamiltonian is not Hermitian", stmt.pos);
    switch (w.scheme) {
      case Scheme::parallel_slow:
        if (!in_centralizer(g, w.hamiltonian, tol))
          error("slow window hamiltonian is not in the centralizer of the "
                "group; the decoupler would average it away",
                stmt.pos);
        break;
      case Scheme::twisted_slow: {
        const Operator& pulse = *w.pulse;
        if (!is_unitary(pulse, 1e-9)) {
          error("twist pulse is not unitary", stmt.pos);
          break;
        }
        bool trivial = in_centralizer(g, pulse, tol);
        for (const Operator& el : g.elements)
          if (!trivial && equal_up_to_phase(pulse, el)) trivial = true;
        if (trivial)
          warning("twist pulse lies in the group or its centralizer: the "
                  "twist is trivial",
                  stmt.pos);
        if (!in_centralizer(twist(g, pulse), w.hamiltonian, tol))
          error("twisted window hamiltonian is not in the twisted "
                "centralizer; the decoupler would average it away",
                stmt.pos);
        break;
      }
      case Scheme::drift_identity_frame:
      case Scheme::drift_strength_restored:
        break;
    }
  }

  if (!p.error_generators.empty()) {
    try {
      ErrorSpace space = make_error_space(p.error_generators);
      CorrectabilityReport rep = is_correctable(g, space, tol);
      if (!rep.correctable) {
        double worst = 0.0;
        for (double r : rep.residuals) worst = std::max(worst, r);
        error("declared error space is not correctable by the group (worst "
              "projected residual " +
                  g17(worst) + ")",
              p.errors_pos);
      }
    } catch (const ArgumentError& e) {
      error(e.what(), p.errors_pos);
    }
  }
  return diags;
}

EventList flatten(const Program& p, long n_cycles_total, double pulse_width) {
  const long used = p.schedule.total_cycles();
  if (used > n_cycles_total)
    throw BoundsError("schedule needs " + std::to_string(used) +
                      " cycles but only " + std::to_string(n_cycles_total) +
                      " were provided");
  if (pulse_width < 0.0) throw ArgumentError("pulse width must be >= 0");
  if (pulse_width > 0.0 && pulse_width >= p.spec.delta_t)
    throw ArgumentError("pulse width must be smaller than delta_t");
  if (!(p.spec.delta_t > 0.0)) throw ArgumentError("dt must be positive");

  const int n = p.spec.group.order();
  const int d = p.spec.group.dim();
  const double dt = p.spec.delta_t;
  const double t_c = p.spec.cycle_time();
  std::vector<Operator> pulses = pulses_from_group(p.spec);

  EventList out;
  out.pulse_width = pulse_width;
  out.total_duration = static_cast<double>(n_cycles_total) * t_c;

  long cycle = 0;
  // drives: empty = free cycle; size 1 = same drive each subinterval;
  // size n with empty slots = drive only where present.
  auto emit_cycle = [&](const std::vector<Operator>& drives) {
    const double base = static_cast<double>(cycle) * t_c;
    for (int j = 0; j < n; ++j) {
      const Operator* dr = nullptr;
      if (!drives.empty()) {
        const Operator& cand =
            drives.size() == 1 ? drives[0]
                               : drives[static_cast<std::size_t>(j)];
        if (cand.size() != 0) dr = &cand;
      }
      Event seg;
      seg.kind = Event::Kind::segment;
      seg.at = base + j * dt;
      seg.duration = dt - pulse_width;
      seg.op = dr ? *dr : zero_op(d);
      seg.role = dr ? "driven" : "free";
      out.events.push_back(std::move(seg));

      Event pulse;
      pulse.kind = Event::Kind::pulse;
      pulse.at = base + (j + 1) * dt - pulse_width;
      pulse.op = pulses[static_cast<std::size_t>(j)];
      pulse.role = "decouple";
      out.events.push_back(std::move(pulse));
    }
    ++cycle;
  };

  auto emit_bracket = [&](const Operator& op, const char* role) {
    Event e;
    e.kind = Event::Kind::pulse;
    e.at = static_cast<double>(cycle) * t_c;
    e.op = op;
    e.role = role;
    out.events.push_back(std::move(e));
  };

  for (const Window& w : p.schedule.windows) {
    std::vector<Operator> drives;
    switch (w.scheme) {
      case Scheme::parallel_slow:
        drives.push_back(w.hamiltonian);
        break;
      case Scheme::twisted_slow:
        drives.push_back((*w.pulse) * w.hamiltonian * w.pulse->adjoint());
        break;
      case Scheme::drift_identity_frame:
        drives.assign(static_cast<std::size_t>(n), Operator());
        drives[0] = w.hamiltonian;
        break;
      case Scheme::drift_strength_restored:
        for (int j = 0; j < n; ++j) {
          const Operator& gj = p.spec.group.elements[static_cast<std::size_t>(j)];
          drives.push_back(gj * w.hamiltonian * gj.adjoint());
        }
        break;
    }
    if (w.scheme == Scheme::twisted_slow) emit_bracket(*w.pulse, "twist_open");
    for (long k = 0; k < w.cycles; ++k) emit_cycle(drives);
    if (w.scheme == Scheme::twisted_slow)
      emit_bracket(w.pulse->adjoint(), "twist_close");
  }
  for (long k = used; k < n_cycles_total; ++k) emit_cycle({});
  return out;
}

StateVector simulate_events(const EventList& list, const Operator& h_total,
                            int bath_dim, StateVector psi,
                            bool hamiltonian_on_during_pulse) {
  const Cplx kI(0.0, 1.0);
  if (bath_dim < 1) throw ArgumentError("bath dimension must be positive");
  if (h_total.rows() != psi.size() || h_total.cols() != psi.size())
    throw ArgumentError("joint hamiltonian does not match the state");
  for (const Event& e : list.events) {
    const long ds = e.op.rows();
    if (ds * bath_dim != psi.size())
      throw ArgumentError("event operator does not match system * bath");
    if (e.kind == Event::Kind::segment) {
      Operator h = h_total + embed_system(e.op, bath_dim);
      psi = expm(-kI * e.duration * h) * psi;
    } else if (list.pulse_width > 0.0 && e.role == "decouple") {
      Operator gen = pulse_generators({e.op}, list.pulse_width)[0];
      Operator h = embed_system(gen, bath_dim);
      if (hamiltonian_on_during_pulse) h += h_total;
      psi = expm(-kI * list.pulse_width * h) * psi;
    } else {
      psi = embed_system(e.op, bath_dim) * psi;
    }
  }
  return psi;
}

}  // namespace dlab
