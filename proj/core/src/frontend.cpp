#include "nra/frontend.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace nra {

ParseError::ParseError(const std::string& msg, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

// ---------------------------------------------------------------------------
// S-expressions

struct Sexp {
  bool is_list = false;
  std::string atom;
  std::vector<Sexp> items;
  std::size_t line = 1, column = 1;

  [[nodiscard]] bool is(std::string_view s) const { return !is_list && atom == s; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, column); }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    while (skip_space(), pos_ < text_.size()) out.push_back(read());
    return out;
  }

 private:
  Sexp read() {
    skip_space();
    Sexp s;
    s.line = line_;
    s.column = column_;
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, column_);
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, column_);
    if (c == '(') {
      advance();
      s.is_list = true;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unbalanced '('", s.line, s.column);
        if (text_[pos_] == ')') {
          advance();
          return s;
        }
        s.items.push_back(read());
      }
    }
    if (c == '|') {
      advance();
      while (pos_ < text_.size() && text_[pos_] != '|') s.atom += advance();
      if (pos_ >= text_.size()) throw ParseError("unterminated '|'", s.line, s.column);
      advance();
      return s;
    }
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';')
      s.atom += advance();
    return s;
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, column_ = 1;
};

// ---------------------------------------------------------------------------
// Terms

/// num / den with den > 0.
struct Arith {
  Polynomial num;
  Integer den = 1;
};

Arith add(const Arith& a, const Arith& b, bool subtract) {
  Polynomial rhs = b.num.scaled(a.den);
  return {subtract ? a.num.scaled(b.den) - rhs : a.num.scaled(b.den) + rhs, a.den * b.den};
}

Arith mul(const Arith& a, const Arith& b) { return {a.num * b.num, a.den * b.den}; }

std::optional<Rational> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  std::size_t dot = std::string::npos, slash = std::string::npos;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] == '.' && dot == std::string::npos && slash == std::string::npos) {
      dot = j;
    } else if (s[j] == '/' && slash == std::string::npos && dot == std::string::npos && j > i) {
      slash = j;
    } else if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
      return std::nullopt;
    }
  }
  Rational q;
  if (dot != std::string::npos) {
    std::string digits = s.substr(i, dot - i) + s.substr(dot + 1);
    if (digits.empty() || dot + 1 == s.size()) return std::nullopt;
    Integer den = 1;
    for (std::size_t k = dot + 1; k < s.size(); ++k) den *= 10;
    q = Rational(Integer(digits), den);
  } else if (slash != std::string::npos) {
    if (slash + 1 == s.size()) return std::nullopt;
    Integer den(s.substr(slash + 1));
    if (den == 0) return std::nullopt;
    q = Rational(Integer(s.substr(i, slash - i)), den);
  } else {
    q = Rational(Integer(s.substr(i)));
  }
  q.canonicalize();
  return i == 1 ? Rational(-q) : q;
}

Arith constant(const Rational& q) { return {Polynomial(q.get_num()), q.get_den()}; }

class TermParser {
 public:
  using Lookup = std::function<std::optional<Var>(const Sexp&)>;

  TermParser(const VarTable& vars, Lookup lookup) : vars_(vars), lookup_(std::move(lookup)) {}

  Formula formula(const Sexp& s) {
    if (!s.is_list) {
      if (s.is("true")) return Formula::top();
      if (s.is("false")) return Formula::bottom();
      Var v = variable(s);
      if (vars_.sort(v) != Sort::Bool) s.fail("expected a Bool term, got Real variable '" + s.atom + "'");
      return Formula::boolean(v);
    }
    const std::string& op = head(s);
    auto& it = s.items;
    if (op == "not") {
      arity(s, 1, 1);
      return Formula::negation(formula(it[1]));
    }
    if (op == "and" || op == "or") {
      std::vector<Formula> fs;
      for (std::size_t i = 1; i < it.size(); ++i) fs.push_back(formula(it[i]));
      return op == "and" ? Formula::conjunction(std::move(fs)) : Formula::disjunction(std::move(fs));
    }
    if (op == "=>") {
      arity(s, 2, SIZE_MAX);
      Formula f = formula(it.back());
      for (std::size_t i = it.size() - 2; i >= 1; --i) f = Formula::negation(formula(it[i])) || f;
      return f;
    }
    if (op == "=" && it.size() >= 3 && is_bool(it[1])) {
      std::vector<Formula> fs;
      for (std::size_t i = 1; i + 1 < it.size(); ++i) {
        Formula a = formula(it[i]), b = formula(it[i + 1]);
        fs.push_back((a && b) || (!a && !b));
      }
      return Formula::conjunction(std::move(fs));
    }
    static const std::map<std::string, Rel> rels{
        {"<", Rel::Lt}, {"<=", Rel::Le}, {"=", Rel::Eq}, {">=", Rel::Ge}, {">", Rel::Gt}};
    auto r = rels.find(op);
    if (r != rels.end()) {
      arity(s, 2, SIZE_MAX);
      std::vector<Formula> fs;
      Arith prev = arith(it[1]);
      for (std::size_t i = 2; i < it.size(); ++i) {
        Arith cur = arith(it[i]);
        Arith d = add(prev, cur, true);
        fs.push_back(Formula::constraint(d.num, r->second));
        prev = std::move(cur);
      }
      return Formula::conjunction(std::move(fs));
    }
    if (is_arith_op(op)) s.fail("expected a Bool term, got arithmetic '" + op + "'");
    s.fail("unknown operator '" + op + "'");
  }

  Arith arith(const Sexp& s) {
    if (!s.is_list) {
      if (auto q = parse_number(s.atom)) return constant(*q);
      if (s.is("true") || s.is("false")) s.fail("expected a Real term, got Bool constant '" + s.atom + "'");
      Var v = variable(s);
      if (vars_.sort(v) != Sort::Real) s.fail("expected a Real term, got Bool variable '" + s.atom + "'");
      return {Polynomial::variable(v), 1};
    }
    const std::string& op = head(s);
    auto& it = s.items;
    if (op == "+" || op == "*") {
      arity(s, 1, SIZE_MAX);
      Arith acc = arith(it[1]);
      for (std::size_t i = 2; i < it.size(); ++i) acc = op == "+" ? add(acc, arith(it[i]), false) : mul(acc, arith(it[i]));
      return acc;
    }
    if (op == "-") {
      arity(s, 1, SIZE_MAX);
      Arith acc = arith(it[1]);
      if (it.size() == 2) return {-acc.num, acc.den};
      for (std::size_t i = 2; i < it.size(); ++i) acc = add(acc, arith(it[i]), true);
      return acc;
    }
    if (op == "/") {
      arity(s, 2, SIZE_MAX);
      Arith acc = arith(it[1]);
      for (std::size_t i = 2; i < it.size(); ++i) {
        Arith d = arith(it[i]);
        if (!d.num.is_constant() || d.num.is_zero()) it[i].fail("division by a non-constant or zero term");
        Integer n = d.num.constant_term();
        acc = {acc.num.scaled(Integer(d.den * sgn(n))), Integer(acc.den * abs(n))};
      }
      return acc;
    }
    if (op == "^") {
      arity(s, 2, 2);
      Arith b = arith(it[1]);
      auto e = parse_number(it[2].atom);
      if (it[2].is_list || !e || e->get_den() != 1 || *e < 0) it[2].fail("exponent must be a natural number");
      unsigned k = static_cast<unsigned>(e->get_num().get_ui());
      Integer den = 1;
      for (unsigned i = 0; i < k; ++i) den *= b.den;
      return {b.num.pow(k), den};
    }
    s.fail("expected a Real term, got '" + op + "'");
  }

 private:
  static bool is_arith_op(const std::string& op) { return op == "+" || op == "-" || op == "*" || op == "/"; }

  bool is_bool(const Sexp& s) const {
    if (!s.is_list) {
      if (s.is("true") || s.is("false")) return true;
      auto v = lookup_(s);
      return v && vars_.sort(*v) == Sort::Bool;
    }
    return !s.items.empty() && !s.items[0].is_list && !is_arith_op(s.items[0].atom) && s.items[0].atom != "^";
  }

  Var variable(const Sexp& s) {
    auto v = lookup_(s);
    if (!v) s.fail("undeclared symbol '" + s.atom + "'");
    return *v;
  }

  static const std::string& head(const Sexp& s) {
    if (s.items.empty() || s.items[0].is_list) s.fail("expected an operator");
    return s.items[0].atom;
  }

  static void arity(const Sexp& s, std::size_t lo, std::size_t hi) {
    std::size_t n = s.items.size() - 1;
    if (n < lo || n > hi) s.fail("wrong number of arguments to '" + s.items[0].atom + "'");
  }

  const VarTable& vars_;
  Lookup lookup_;
};

TermParser::Lookup plain_lookup(const VarTable& vars) {
  return [&vars](const Sexp& s) { return vars.lookup(s.atom); };
}

Sort parse_sort(const Sexp& s) {
  if (s.is("Real")) return Sort::Real;
  if (s.is("Bool")) return Sort::Bool;
  s.fail("unknown sort; expected Real or Bool");
}

Value parse_value(const Sexp& s, Sort sort, const VarTable& vars) {
  if (sort == Sort::Bool) {
    if (s.is("true")) return true;
    if (s.is("false")) return false;
    s.fail("expected true or false");
  }
  if (s.is_list && !s.items.empty() && s.items[0].is("root-of")) {
    if (s.items.size() != 3) s.fail("expected (root-of <poly> <k>)");
    // The polynomial is univariate in any one symbol.
    VarTable local;
    TermParser tp(local, [&local](const Sexp& a) -> std::optional<Var> {
      if (auto v = local.lookup(a.atom)) return v;
      if (local.size() > 0) a.fail("root-of polynomial must be univariate");
      return local.declare(a.atom, Sort::Real);
    });
    Arith p = tp.arith(s.items[1]);
    auto k = parse_number(s.items[2].atom);
    if (s.items[2].is_list || !k || k->get_den() != 1 || *k < 1) s.items[2].fail("root index must be positive");
    if (p.num.is_constant()) s.fail("root-of polynomial is constant");
    auto roots = isolate_real_roots(p.num, 0);
    std::size_t idx = k->get_num().get_ui();
    if (idx > roots.size()) s.fail("polynomial has fewer real roots than the index");
    return roots[idx - 1];
  }
  TermParser tp(vars, [](const Sexp& a) -> std::optional<Var> { a.fail("expected a constant"); });
  Arith a = tp.arith(s);
  return AlgebraicNumber(Rational(a.num.constant_term(), a.den));
}

}  // namespace

// ---------------------------------------------------------------------------

Formula ProblemScript::conjunction(AssertKind kind) const {
  std::vector<Formula> fs;
  for (auto& [k, f] : assertions)
    if (k == kind) fs.push_back(f);
  return Formula::conjunction(std::move(fs));
}

Formula ProblemScript::all() const {
  std::vector<Formula> fs;
  for (auto& a : assertions) fs.push_back(a.second);
  return Formula::conjunction(std::move(fs));
}

Var TransitionSystem::primed(Var s) const {
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] == s) return next[i];
  throw std::out_of_range("not a state variable");
}

ProblemScript parse_script(std::string_view text) {
  ProblemScript script;
  bool interpolant = false;
  for (auto& cmd : Reader(text).read_all()) {
    if (!cmd.is_list || cmd.items.empty() || cmd.items[0].is_list) cmd.fail("expected a command");
    const std::string& op = cmd.items[0].atom;
    auto& it = cmd.items;
    if (op == "declare-const" || op == "declare-fun") {
      std::size_t need = op == "declare-const" ? 3 : 4;
      if (it.size() != need || it[1].is_list) cmd.fail("expected (" + op + " <symbol> <sort>)");
      if (op == "declare-fun" && (!it[2].is_list || !it[2].items.empty())) it[2].fail("only constants are supported");
      if (script.vars.lookup(it[1].atom)) it[1].fail("symbol '" + it[1].atom + "' already declared");
      script.vars.declare(it[1].atom, parse_sort(it.back()));
    } else if (op == "assert" || op == "assert-A" || op == "assert-B") {
      if (it.size() != 2) cmd.fail("expected (" + op + " <term>)");
      AssertKind k = op == "assert" ? AssertKind::Plain : op == "assert-A" ? AssertKind::A : AssertKind::B;
      TermParser tp(script.vars, plain_lookup(script.vars));
      script.assertions.emplace_back(k, tp.formula(it[1]));
    } else if (op == "check-sat") {
      script.commands.push_back({ScriptCommand::Kind::CheckSat, {}, cmd.line});
    } else if (op == "check-sat-assuming-model") {
      ScriptCommand c{ScriptCommand::Kind::CheckSatAssumingModel, {}, cmd.line};
      for (std::size_t i = 1; i < it.size(); ++i) {
        auto& p = it[i];
        if (!p.is_list || p.items.size() != 2 || p.items[0].is_list) p.fail("expected (<symbol> <value>)");
        auto v = script.vars.lookup(p.items[0].atom);
        if (!v) p.items[0].fail("undeclared symbol '" + p.items[0].atom + "'");
        c.model.set(*v, parse_value(p.items[1], script.vars.sort(*v), script.vars));
      }
      script.commands.push_back(std::move(c));
    } else if (op == "compute-interpolant") {
      if (interpolant) cmd.fail("at most one compute-interpolant per script");
      interpolant = true;
      script.commands.push_back({ScriptCommand::Kind::ComputeInterpolant, {}, cmd.line});
    } else if (op == "get-model") {
      script.commands.push_back({ScriptCommand::Kind::GetModel, {}, cmd.line});
    } else if (op == "set-logic" || op == "set-info" || op == "set-option" || op == "exit") {
      // Accepted and ignored.
    } else {
      cmd.fail("unknown command '" + op + "'");
    }
  }
  return script;
}

TransitionSystem parse_system(std::string_view text) {
  auto top = Reader(text).read_all();
  if (top.size() != 1) throw ParseError("expected exactly one define-system", 1, 1);
  const Sexp& d = top[0];
  if (!d.is_list || d.items.empty() || !d.items[0].is("define-system")) d.fail("expected (define-system ...)");
  TransitionSystem sys;
  std::map<std::string, const Sexp*> parts;
  for (std::size_t i = 1; i < d.items.size(); i += 2) {
    const Sexp& key = d.items[i];
    if (key.is_list || key.atom.empty() || key.atom[0] != ':') key.fail("expected a keyword");
    if (i + 1 >= d.items.size()) key.fail("missing value for " + key.atom);
    if (key.atom != ":state" && key.atom != ":init" && key.atom != ":trans" && key.atom != ":prop")
      key.fail("unknown keyword " + key.atom);
    if (!parts.emplace(key.atom, &d.items[i + 1]).second) key.fail("duplicate keyword " + key.atom);
  }
  for (const char* k : {":state", ":init", ":trans", ":prop"})
    if (!parts.count(k)) d.fail(std::string("missing ") + k);

  const Sexp& st = *parts[":state"];
  if (!st.is_list) st.fail("expected a list of state variables");
  for (auto& decl : st.items) {
    if (!decl.is_list || decl.items.size() != 2 || decl.items[0].is_list) decl.fail("expected (<symbol> <sort>)");
    const std::string& name = decl.items[0].atom;
    if (!name.empty() && name.back() == '\'') decl.items[0].fail("state variable names cannot end in a prime");
    if (sys.vars.lookup(name)) decl.items[0].fail("duplicate state variable '" + name + "'");
    Sort sort = parse_sort(decl.items[1]);
    sys.state.push_back(sys.vars.declare(name, sort));
  }
  for (Var s : sys.state) sys.next.push_back(sys.vars.declare(sys.vars.name(s) + "'", sys.vars.sort(s)));

  auto current_only = [&sys](const Sexp& a) -> std::optional<Var> {
    if (!a.atom.empty() && a.atom.back() == '\'') {
      if (sys.vars.lookup(a.atom)) a.fail("primed variable '" + a.atom + "' outside :trans");
      a.fail("'" + a.atom + "' is not the prime of a state variable");
    }
    return sys.vars.lookup(a.atom);
  };
  auto both = [&sys](const Sexp& a) -> std::optional<Var> {
    auto v = sys.vars.lookup(a.atom);
    if (!v && !a.atom.empty() && a.atom.back() == '\'')
      a.fail("'" + a.atom + "' is not the prime of a state variable");
    return v;
  };
  sys.init = TermParser(sys.vars, current_only).formula(*parts[":init"]);
  sys.trans = TermParser(sys.vars, both).formula(*parts[":trans"]);
  sys.prop = TermParser(sys.vars, current_only).formula(*parts[":prop"]);
  return sys;
}

Formula parse_formula(std::string_view text, const VarTable& vars) {
  auto top = Reader(text).read_all();
  if (top.size() != 1) throw ParseError("expected exactly one term", 1, 1);
  return TermParser(vars, plain_lookup(vars)).formula(top[0]);
}

Assignment parse_model(std::string_view text, const VarTable& vars) {
  Assignment m;
  std::string t(text);
  bool pairs = t.find('(') != std::string::npos && t.find('=') == std::string::npos;
  if (!pairs) {
    // x=1,y=-1/2
    std::size_t line_col = 1;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("expected <name>=<value>", 1, line_col);
      auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
        return s;
      };
      std::string name = trim(item.substr(0, eq)), val = trim(item.substr(eq + 1));
      auto v = vars.lookup(name);
      if (!v) throw ParseError("undeclared symbol '" + name + "'", 1, line_col);
      auto vs = Reader(val).read_all();
      if (vs.size() != 1) throw ParseError("expected one value for '" + name + "'", 1, line_col);
      m.set(*v, parse_value(vs[0], vars.sort(*v), vars));
      line_col += item.size() + 1;
    }
    return m;
  }
  for (auto& p : Reader(text).read_all()) {
    if (!p.is_list || p.items.size() != 2 || p.items[0].is_list) p.fail("expected (<symbol> <value>)");
    auto v = vars.lookup(p.items[0].atom);
    if (!v) p.items[0].fail("undeclared symbol '" + p.items[0].atom + "'");
    m.set(*v, parse_value(p.items[1], vars.sort(*v), vars));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Printing

std::string print_term(const Formula& f, const VarTable& vars) { return to_smtlib(f, vars.namer()); }

std::string print_term(const Clause& c, const VarTable& vars) { return print_term(to_formula(c), vars); }

std::string print_term(const std::vector<Clause>& cnf, const VarTable& vars) {
  return print_term(to_formula(cnf), vars);
}

std::string print_value(const Value& v) { return to_smtlib(v); }

std::string print_model(const Assignment& m, const VarTable& vars) {
  std::string s = "(model";
  for (Var v = 0; v < vars.size(); ++v) {
    auto val = m.get(v);
    if (!val) continue;
    s += "\n  (define-fun " + vars.name(v) + " () " + (vars.sort(v) == Sort::Bool ? "Bool " : "Real ") +
         print_value(*val) + ")";
    if (auto* a = std::get_if<AlgebraicNumber>(&*val); a && !a->is_rational()) s += " ; ~" + a->to_decimal(6);
  }
  return s + ")";
}

std::string print_system(const TransitionSystem& s) {
  std::string out = "(define-system\n  :state (";
  for (std::size_t i = 0; i < s.state.size(); ++i) {
    if (i) out += " ";
    out += "(" + s.vars.name(s.state[i]) + (s.vars.sort(s.state[i]) == Sort::Bool ? " Bool)" : " Real)");
  }
  out += ")\n  :init " + print_term(s.init, s.vars);
  out += "\n  :trans " + print_term(s.trans, s.vars);
  out += "\n  :prop " + print_term(s.prop, s.vars) + ")\n";
  return out;
}

// ---------------------------------------------------------------------------
// Script execution

ScriptOutcome run_script(const ProblemScript& script, std::ostream& out, const ScriptOptions& options) {
  ScriptOutcome res;
  std::optional<Assignment> last_model;
  auto status_text = [](Status s) { return s == Status::Sat ? "sat" : s == Status::Unsat ? "unsat" : "unknown"; };
  auto add_stats = [&res](const Statistics& s) {
    res.stats.conflicts += s.conflicts;
    res.stats.decisions += s.decisions;
    res.stats.propagations += s.propagations;
    res.stats.learned += s.learned;
    res.stats.checks += s.checks;
  };
  for (auto& cmd : script.commands) {
    switch (cmd.kind) {
      case ScriptCommand::Kind::CheckSat:
      case ScriptCommand::Kind::CheckSatAssumingModel: {
        Solver s;
        s.set_limits(options.limits);
        for (auto& a : script.assertions) s.assert_formula(a.second);
        auto r = s.check_modulo(cmd.model);
        add_stats(s.stats());
        out << status_text(r.status) << "\n";
        if (r.status == Status::Unknown) res.any_unknown = true;
        last_model.reset();
        if (r.status == Status::Sat) last_model = r.model;
        if (r.status == Status::Unsat && cmd.kind == ScriptCommand::Kind::CheckSatAssumingModel) {
          Clause i = options.basic ? eliminate_extended(r.interpolant, cmd.model) : r.interpolant;
          res.interpolant_clauses += 1;
          out << print_term(i, script.vars) << "\n";
        }
        break;
      }
      case ScriptCommand::Kind::ComputeInterpolant: {
        InterpolationOptions io;
        io.limits = options.limits;
        io.basic = options.basic;
        auto r = interpolate(script.conjunction(AssertKind::A), script.conjunction(AssertKind::B), io);
        out << status_text(r.status) << "\n";
        last_model.reset();
        if (r.status == Status::Unknown) res.any_unknown = true;
        if (r.status == Status::Sat) last_model = r.model;
        if (r.status == Status::Unsat) {
          res.interpolant_clauses += r.interpolant.size();
          out << print_term(r.interpolant, script.vars) << "\n";
        }
        break;
      }
      case ScriptCommand::Kind::GetModel:
        if (last_model)
          out << print_model(*last_model, script.vars) << "\n";
        else
          out << "(error \"no model available\")\n";
        break;
    }
  }
  return res;
}

}  // namespace nra
