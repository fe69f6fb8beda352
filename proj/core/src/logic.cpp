#include "tribo/logic.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <optional>
#include <sstream>

namespace tribo {

std::string_view cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace {

bool compare(int x, CmpOp op, int y) {
  switch (op) {
    case CmpOp::Eq: return x == y;
    case CmpOp::Ne: return x != y;
    case CmpOp::Lt: return x < y;
    case CmpOp::Le: return x <= y;
    case CmpOp::Gt: return x > y;
    case CmpOp::Ge: return x >= y;
  }
  return false;
}

CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

TermPtr make_term(Term t) { return std::make_shared<const Term>(std::move(t)); }
FormulaPtr make_formula(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

bool is_ident_start(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>* sequences)
      : s_(text), sequences_(sequences) {}

  FormulaPtr parse() {
    auto f = iff();
    ws();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  struct Operand {
    std::optional<SeqOperand> seq;
    TermPtr term;
  };

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool looking_at(std::string_view tok) {
    ws();
    return s_.substr(pos_, tok.size()) == tok;
  }
  bool eat(std::string_view tok) {
    if (!looking_at(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string identifier() {
    ws();
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail("expected a variable name");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  FormulaPtr iff() {
    auto f = implies();
    while (eat("<=>")) f = binary(Formula::Kind::Iff, f, implies());
    return f;
  }

  FormulaPtr implies() {
    auto f = disjunction();
    if (eat("=>")) return binary(Formula::Kind::Implies, f, implies());
    return f;
  }

  FormulaPtr disjunction() {
    auto f = conjunction();
    while (eat("|")) f = binary(Formula::Kind::Or, f, conjunction());
    return f;
  }

  FormulaPtr conjunction() {
    auto f = unary();
    while (eat("&")) f = binary(Formula::Kind::And, f, unary());
    return f;
  }

  static FormulaPtr binary(Formula::Kind kind, FormulaPtr a, FormulaPtr b) {
    Formula f;
    f.kind = kind;
    f.left = std::move(a);
    f.right = std::move(b);
    return make_formula(std::move(f));
  }

  // A quantifier is E or A followed by variables, either attached ("Ei") or
  // separated ("E i, j").
  std::optional<FormulaPtr> quantifier() {
    ws();
    if (pos_ >= s_.size() || (s_[pos_] != 'E' && s_[pos_] != 'A')) return std::nullopt;
    const std::size_t start = pos_;
    std::size_t end = pos_ + 1;
    while (end < s_.size() && is_ident_char(s_[end])) ++end;
    std::size_t after = end;
    while (after < s_.size() && std::isspace(static_cast<unsigned char>(s_[after]))) ++after;
    if (after < s_.size() && s_[after] == '[') return std::nullopt;  // a sequence named E...
    Formula q;
    q.kind = s_[start] == 'E' ? Formula::Kind::Exists : Formula::Kind::Forall;
    if (end == start + 1) {
      pos_ = end;
      q.vars.push_back(identifier());
      while (eat(",")) q.vars.push_back(identifier());
    } else {
      if (!is_ident_start(s_[start + 1])) return std::nullopt;
      q.vars.emplace_back(s_.substr(start + 1, end - start - 1));
      pos_ = end;
    }
    q.left = iff();
    return make_formula(std::move(q));
  }

  FormulaPtr unary() {
    if (eat("~")) {
      Formula f;
      f.kind = Formula::Kind::Not;
      f.left = unary();
      return make_formula(std::move(f));
    }
    if (auto q = quantifier()) return *q;
    return primary();
  }

  bool at_comparison_or_arithmetic() {
    ws();
    if (pos_ >= s_.size()) return false;
    if (looking_at("<=>") || looking_at("=>")) return false;
    const char c = s_[pos_];
    return c == '+' || c == '-' || c == '*' || c == '<' || c == '>' || c == '=' ||
           (c == '!' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '=');
  }

  FormulaPtr primary() {
    ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      const std::size_t start = pos_;
      std::optional<ParseError> first_error;
      try {
        ++pos_;
        auto f = iff();
        expect(")");
        if (!at_comparison_or_arithmetic()) return f;
      } catch (const ParseError& e) {
        first_error = e;
      }
      pos_ = start;
      try {
        return comparison();
      } catch (const ParseError& e) {
        if (first_error && first_error->position() > e.position()) throw *first_error;
        throw;
      }
    }
    if (eat("$")) return reference();
    return comparison();
  }

  FormulaPtr reference() {
    Formula f;
    f.kind = Formula::Kind::Reference;
    f.name = identifier();
    expect("(");
    if (!eat(")")) {
      do f.args.push_back(term());
      while (eat(","));
      expect(")");
    }
    return make_formula(std::move(f));
  }

  std::optional<CmpOp> comparison_op() {
    if (looking_at("<=>") || looking_at("=>")) return std::nullopt;
    if (eat("<=")) return CmpOp::Le;
    if (eat(">=")) return CmpOp::Ge;
    if (eat("!=")) return CmpOp::Ne;
    if (eat("<")) return CmpOp::Lt;
    if (eat(">")) return CmpOp::Gt;
    if (eat("=")) return CmpOp::Eq;
    return std::nullopt;
  }

  FormulaPtr comparison() {
    Operand lhs = operand();
    const std::size_t op_pos = pos_;
    auto op = comparison_op();
    if (!op) fail("expected a comparison operator");
    Operand rhs = operand();
    if (!lhs.seq && !rhs.seq) {
      Formula f;
      f.kind = Formula::Kind::Compare;
      f.op = *op;
      f.lhs = lhs.term;
      f.rhs = rhs.term;
      return make_formula(std::move(f));
    }
    auto letter = [&](const Operand& o) {
      if (o.seq) return *o.seq;
      if (o.term->kind != Term::Kind::Const || o.term->value > 1000000) {
        pos_ = op_pos;
        fail("a sequence can only be compared with an indexed sequence or a letter");
      }
      SeqOperand l;
      l.letter = static_cast<int>(o.term->value.get_si());
      return l;
    };
    Formula f;
    f.kind = Formula::Kind::SeqCompare;
    f.op = *op;
    if (!lhs.seq) {
      f.op = mirror(*op);
      std::swap(lhs, rhs);
    }
    f.seq_lhs = *lhs.seq;
    f.seq_rhs = letter(rhs);
    return make_formula(std::move(f));
  }

  Operand operand() {
    ws();
    if (pos_ < s_.size() && std::isupper(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (!looking_at("[")) {
        pos_ = start;
        fail("expected '[' after sequence name '" + name + "'");
      }
      if (sequences_ && !sequences_->count(name)) {
        pos_ = start;
        fail("unknown sequence '" + name + "'");
      }
      expect("[");
      SeqOperand o;
      o.sequence = std::move(name);
      o.index = term();
      expect("]");
      return {o, nullptr};
    }
    return {std::nullopt, term()};
  }

  TermPtr term() {
    auto t = product();
    while (true) {
      if (eat("+")) {
        t = make_term({Term::Kind::Add, "", 0, t, product()});
      } else if (looking_at("-")) {
        ++pos_;
        t = make_term({Term::Kind::Sub, "", 0, t, product()});
      } else {
        return t;
      }
    }
  }

  TermPtr product() {
    auto t = factor();
    while (true) {
      ws();
      const std::size_t at = pos_;
      if (!eat("*")) return t;
      auto u = factor();
      const bool tc = t->kind == Term::Kind::Const;
      const bool uc = u->kind == Term::Kind::Const;
      if (tc && uc) {
        t = make_term({Term::Kind::Const, "", t->value * u->value, nullptr, nullptr});
      } else if (tc) {
        t = make_term({Term::Kind::Scale, "", t->value, nullptr, u});
      } else if (uc) {
        t = make_term({Term::Kind::Scale, "", u->value, nullptr, t});
      } else {
        pos_ = at;
        fail("multiplication needs a constant factor");
      }
    }
  }

  TermPtr factor() {
    ws();
    if (pos_ >= s_.size()) fail("unexpected end of query");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return make_term(
          {Term::Kind::Const, "", Natural(std::string(s_.substr(start, pos_ - start))), nullptr, nullptr});
    }
    if (c == '(') {
      ++pos_;
      auto t = term();
      expect(")");
      return t;
    }
    if (is_ident_start(c)) return make_term({Term::Kind::Var, identifier(), 0, nullptr, nullptr});
    if (std::isupper(static_cast<unsigned char>(c)))
      fail("sequence values cannot be used inside arithmetic");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::set<std::string>* sequences_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

int term_level(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Add:
    case Term::Kind::Sub: return 1;
    case Term::Kind::Scale: return 2;
    default: return 3;
  }
}

int formula_level(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return 0;
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
  }
}

std::string wrap(const std::string& s, bool parens) { return parens ? "(" + s + ")" : s; }

std::string seq_text(const SeqOperand& o) {
  if (o.sequence.empty()) return std::to_string(o.letter);
  return o.sequence + "[" + to_text(*o.index) + "]";
}

}  // namespace

FormulaPtr parse(std::string_view text, const std::set<std::string>* sequences) {
  return Parser(text, sequences).parse();
}

std::string to_text(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var: return t.name;
    case Term::Kind::Const: return t.value.get_str();
    case Term::Kind::Add:
    case Term::Kind::Sub:
      return to_text(*t.lhs) + (t.kind == Term::Kind::Add ? " + " : " - ") +
             wrap(to_text(*t.rhs), term_level(*t.rhs) <= 1);
    case Term::Kind::Scale: return t.value.get_str() + " * " + wrap(to_text(*t.rhs), term_level(*t.rhs) <= 2);
  }
  return "";
}

std::string to_text(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Compare: return to_text(*f.lhs) + " " + std::string(cmp_text(f.op)) + " " + to_text(*f.rhs);
    case K::SeqCompare:
      return seq_text(f.seq_lhs) + " " + std::string(cmp_text(f.op)) + " " + seq_text(f.seq_rhs);
    case K::Reference: {
      std::string s = "$" + f.name + "(";
      for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? ", " : "") + to_text(*f.args[i]);
      return s + ")";
    }
    case K::Not: {
      const int l = formula_level(*f.left);
      return "~" + wrap(to_text(*f.left), l >= 1 && l < 5);
    }
    case K::Exists:
    case K::Forall: {
      std::string s(1, f.kind == K::Exists ? 'E' : 'A');
      if (f.vars.size() == 1) {
        s += f.vars[0];
      } else {
        s += ' ';
        for (std::size_t i = 0; i < f.vars.size(); ++i) s += (i ? ", " : "") + f.vars[i];
      }
      return s + " " + to_text(*f.left);
    }
    default: {
      const int level = formula_level(f);
      const int ll = formula_level(*f.left);
      const int rl = formula_level(*f.right);
      const char* op = f.kind == K::And ? " & " : f.kind == K::Or ? " | " : f.kind == K::Implies ? " => " : " <=> ";
      const bool left_parens = ll == 0 || ll < level || (ll == level && f.kind == K::Implies);
      const bool right_parens = rl != 0 && (rl < level || (rl == level && f.kind != K::Implies));
      return wrap(to_text(*f.left), left_parens) + op + wrap(to_text(*f.right), right_parens);
    }
  }
}

namespace {

void term_vars(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Var) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  if (t.lhs) term_vars(*t.lhs, out);
  if (t.rhs) term_vars(*t.rhs, out);
}

void formula_vars(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto add_term = [&](const TermPtr& t) {
    if (!t) return;
    std::vector<std::string> vs;
    term_vars(*t, vs);
    for (auto& v : vs)
      if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
          std::find(out.begin(), out.end(), v) == out.end())
        out.push_back(v);
  };
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Compare:
      add_term(f.lhs);
      add_term(f.rhs);
      break;
    case K::SeqCompare:
      add_term(f.seq_lhs.index);
      add_term(f.seq_rhs.index);
      break;
    case K::Reference:
      for (auto& a : f.args) add_term(a);
      break;
    case K::Exists:
    case K::Forall: {
      const std::size_t mark = bound.size();
      bound.insert(bound.end(), f.vars.begin(), f.vars.end());
      formula_vars(*f.left, bound, out);
      bound.resize(mark);
      break;
    }
    default:
      formula_vars(*f.left, bound, out);
      if (f.right) formula_vars(*f.right, bound, out);
  }
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  formula_vars(f, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Sequence atoms

Dfa sequence_relation(const Kernel& k, const Dfao& d1, const std::string& a, CmpOp op,
                      const Dfao& d2, const std::string& b) {
  const std::size_t n1 = d1.num_states(), n2 = d2.num_states();
  const bool same = a == b;
  const std::size_t alphabet = same ? 2 : 4;
  std::vector<State> delta(n1 * n2 * alphabet);
  std::vector<std::uint8_t> acc(n1 * n2);
  for (State p = 0; p < n1; ++p)
    for (State q = 0; q < n2; ++q) {
      const State id = static_cast<State>(p * n2 + q);
      acc[id] = compare(d1.output(p), op, d2.output(q));
      for (Symbol s = 0; s < alphabet; ++s) {
        const int x = same ? static_cast<int>(s) : static_cast<int>(s >> 1);
        const int y = same ? static_cast<int>(s) : static_cast<int>(s & 1);
        delta[id * alphabet + s] = static_cast<State>(d1.next(p, x) * n2 + d2.next(q, y));
      }
    }
  std::vector<std::string> tracks = same ? std::vector<std::string>{a} : std::vector<std::string>{a, b};
  Dfa raw(tracks, n1 * n2, static_cast<State>(d1.initial() * n2 + d2.initial()), std::move(delta),
          std::move(acc));
  return k.intersect(minimize(raw), k.universe(tracks));
}

Dfa sequence_letter(const Kernel& k, const Dfao& d, const std::string& a, CmpOp op, int letter) {
  std::vector<std::uint8_t> acc(d.num_states());
  std::vector<State> delta(2 * d.num_states());
  for (State q = 0; q < d.num_states(); ++q) {
    acc[q] = compare(d.output(q), op, letter);
    delta[2 * q] = d.next(q, 0);
    delta[2 * q + 1] = d.next(q, 1);
  }
  Dfa raw({a}, d.num_states(), d.initial(), std::move(delta), std::move(acc));
  return k.intersect(minimize(raw), k.universe({a}));
}

// ---------------------------------------------------------------------------
// Compiler

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

class Compiler {
 public:
  explicit Compiler(const Environment& env) : env_(env), k_(*env.numeration, env.limits) {}

  CompiledPredicate run(const Formula& f, const std::vector<std::string>* params) {
    const auto t0 = Clock::now();
    CompiledPredicate out;
    out.free_tracks = free_variables(f);
    if (params) {
      for (const auto& v : out.free_tracks)
        if (std::find(params->begin(), params->end(), v) == params->end())
          throw CompileError("free variable '" + v + "' is not a declared parameter", to_text(f), false);
      if (std::set<std::string>(params->begin(), params->end()).size() != params->size())
        throw CompileError("repeated parameter", to_text(f), false);
      out.free_tracks = *params;
    }
    Dfa d = formula(f);
    for (const auto& v : out.free_tracks)
      if (!d.has_track(v)) d = k_.intersect(d, k_.universe({v}));
    out.dfa = reorder(d, out.free_tracks);
    out.log = std::move(log_);
    out.peak_states = k_.peak_states();
    out.total_ms = ms_since(t0);
    return out;
  }

 private:
  struct Flat {
    bool is_const = false;
    Natural value;
    std::string var;
    std::optional<Dfa> constraint;
    bool aux = false;
  };

  template <typename Build>
  Dfa step(const std::string& text, Build&& build) {
    const auto t0 = Clock::now();
    Dfa d;
    try {
      d = build();
    } catch (const ResourceError& e) {
      throw CompileError("could not compile '" + text + "': " + e.what(), text, true);
    }
    log_.push_back({text, d.num_states(), ms_since(t0)});
    return d;
  }

  std::string fresh() { return "#" + std::to_string(++counter_); }

  void materialize(Flat& f) {
    if (!f.is_const) return;
    f.is_const = false;
    f.var = fresh();
    f.constraint = k_.constant(f.value, f.var);
    f.aux = true;
  }

  Dfa absorb(Dfa rel, const Flat& f) {
    if (f.constraint) rel = k_.intersect(rel, *f.constraint);
    if (f.aux && rel.has_track(f.var)) rel = k_.exists(rel, f.var);
    return rel;
  }

  Flat constant(Natural v) {
    Flat f;
    f.is_const = true;
    f.value = std::move(v);
    return f;
  }

  Flat flatten(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Var: {
        Flat f;
        f.var = t.name;
        return f;
      }
      case Term::Kind::Const: return constant(t.value);
      case Term::Kind::Add:
      case Term::Kind::Sub: {
        Flat a = flatten(*t.lhs);
        Flat b = flatten(*t.rhs);
        const bool add = t.kind == Term::Kind::Add;
        if (a.is_const && b.is_const && (add || a.value >= b.value))
          return constant(add ? Natural(a.value + b.value) : Natural(a.value - b.value));
        Flat out;
        out.var = fresh();
        out.aux = true;
        out.constraint = step(to_text(t), [&] {
          materialize(a);
          materialize(b);
          Dfa rel = add ? k_.addition(a.var, b.var, out.var) : k_.addition(b.var, out.var, a.var);
          return absorb(absorb(std::move(rel), a), b);
        });
        return out;
      }
      case Term::Kind::Scale: {
        Flat x = flatten(*t.rhs);
        if (x.is_const) return constant(t.value * x.value);
        if (t.value == 0) return constant(0);
        if (t.value == 1) return x;
        Flat out;
        out.aux = true;
        out.constraint = step(to_text(t), [&] {
          // Double and add, most significant bit first; the relation links x
          // to the running multiple `acc`.
          const std::string bits = t.value.get_str(2);
          std::optional<Dfa> rel;
          std::string acc = x.var;
          auto extend = [&](Dfa next, const std::string& drop) {
            rel = rel ? k_.intersect(*rel, next) : std::move(next);
            if (drop != x.var) rel = k_.exists(*rel, drop);
          };
          for (std::size_t i = 1; i < bits.size(); ++i) {
            const std::string doubled = fresh();
            extend(k_.addition(acc, acc, doubled), acc);
            acc = doubled;
            if (bits[i] == '1') {
              const std::string sum = fresh();
              extend(k_.addition(acc, x.var, sum), acc);
              acc = sum;
            }
          }
          out.var = acc;
          return absorb(std::move(*rel), x);
        });
        return out;
      }
    }
    throw std::logic_error("flatten: unknown term");
  }

  Dfa relation(CmpOp op, const std::string& x, const std::string& y) {
    switch (op) {
      case CmpOp::Lt: return k_.less_than(x, y);
      case CmpOp::Gt: return k_.less_than(y, x);
      case CmpOp::Eq: return k_.equal(x, y);
      case CmpOp::Ne: return k_.complement(k_.equal(x, y));
      case CmpOp::Le: return k_.complement(k_.less_than(y, x));
      case CmpOp::Ge: return k_.complement(k_.less_than(x, y));
    }
    throw std::logic_error("relation: unknown operator");
  }

  const Dfao& sequence(const std::string& name, const std::string& text) {
    auto it = env_.sequences.find(name);
    if (it == env_.sequences.end())
      throw CompileError("unknown sequence '" + name + "' in '" + text + "'", text, false);
    return it->second;
  }

  Dfa formula(const Formula& f) {
    using K = Formula::Kind;
    const std::string text = to_text(f);
    switch (f.kind) {
      case K::Compare: {
        Flat a = flatten(*f.lhs);
        Flat b = flatten(*f.rhs);
        if (a.is_const && b.is_const) {
          const int c = cmp(a.value, b.value);
          return step(text, [&] { return Dfa::constant(compare(c, f.op, 0)); });
        }
        return step(text, [&] {
          materialize(a);
          materialize(b);
          return absorb(absorb(relation(f.op, a.var, b.var), a), b);
        });
      }
      case K::SeqCompare: {
        const Dfao& d1 = sequence(f.seq_lhs.sequence, text);
        Flat a = flatten(*f.seq_lhs.index);
        if (f.seq_rhs.sequence.empty()) {
          const auto& outs = d1.outputs();
          if (std::find(outs.begin(), outs.end(), f.seq_rhs.letter) == outs.end())
            throw CompileError("letter " + std::to_string(f.seq_rhs.letter) +
                                   " is not an output of " + f.seq_lhs.sequence,
                               text, false);
          return step(text, [&] {
            materialize(a);
            return absorb(sequence_letter(k_, d1, a.var, f.op, f.seq_rhs.letter), a);
          });
        }
        const Dfao& d2 = sequence(f.seq_rhs.sequence, text);
        Flat b = flatten(*f.seq_rhs.index);
        return step(text, [&] {
          materialize(a);
          materialize(b);
          return absorb(absorb(sequence_relation(k_, d1, a.var, f.op, d2, b.var), a), b);
        });
      }
      case K::Reference: {
        auto it = env_.predicates.find(f.name);
        if (it == env_.predicates.end())
          throw CompileError("unknown predicate '" + f.name + "'", text, false);
        const CompiledPredicate& p = it->second;
        if (p.free_tracks.size() != f.args.size())
          throw CompileError("predicate '" + f.name + "' takes " +
                                 std::to_string(p.free_tracks.size()) + " arguments",
                             text, false);
        std::vector<Flat> args;
        for (const auto& a : f.args) args.push_back(flatten(*a));
        return step(text, [&] {
          std::map<std::string, std::string> names;
          for (std::size_t i = 0; i < args.size(); ++i) {
            materialize(args[i]);
            names[p.free_tracks[i]] = args[i].var;
          }
          Dfa rel = k_.rename(p.dfa, names);
          for (const auto& a : args) rel = absorb(std::move(rel), a);
          return rel;
        });
      }
      case K::Not: {
        Dfa a = formula(*f.left);
        return step(text, [&] { return k_.complement(a); });
      }
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff: {
        Dfa a = formula(*f.left);
        Dfa b = formula(*f.right);
        const BoolOp op = f.kind == K::And ? kAnd : f.kind == K::Or ? kOr : f.kind == K::Implies ? kImplies : kIff;
        return step(text, [&] { return k_.product(a, b, op); });
      }
      case K::Exists:
      case K::Forall: {
        Dfa body = formula(*f.left);
        return step(text, [&] {
          const bool all = f.kind == K::Forall;
          Dfa d = all ? k_.complement(body) : body;
          for (const auto& v : f.vars)
            if (d.has_track(v)) d = k_.exists(d, v);
          return all ? k_.complement(d) : d;
        });
      }
    }
    throw std::logic_error("compile: unknown formula");
  }

  const Environment& env_;
  Kernel k_;
  std::vector<LogEntry> log_;
  int counter_ = 0;
};

}  // namespace

CompiledPredicate compile(const Formula& f, const Environment& env) {
  return Compiler(env).run(f, nullptr);
}

CompiledPredicate compile(const Formula& f, const Environment& env,
                          const std::vector<std::string>& params) {
  return Compiler(env).run(f, &params);
}

CompiledPredicate compile(std::string_view text, const Environment& env) {
  std::set<std::string> names;
  for (const auto& [name, d] : env.sequences) names.insert(name);
  return compile(*parse(text, &names), env);
}

CompiledPredicate compile(std::string_view text, const Environment& env,
                          const std::vector<std::string>& params) {
  std::set<std::string> names;
  for (const auto& [name, d] : env.sequences) names.insert(name);
  return compile(*parse(text, &names), env, params);
}

std::string format_log(const CompiledPredicate& p, bool times) {
  std::ostringstream out;
  for (std::size_t i = 0; i < p.log.size(); ++i) {
    const auto& e = p.log[i];
    out << std::string(i, ' ') << e.text << " with " << e.states << " states";
    if (times) out << ", in " << static_cast<long long>(e.ms) << "ms";
    out << '\n';
  }
  if (times) out << "overall time: " << static_cast<long long>(p.total_ms) << "ms\n";
  return out.str();
}

}  // namespace tribo
