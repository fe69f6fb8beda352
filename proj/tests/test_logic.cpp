#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "support.hpp"

using namespace tribo;

namespace {

std::vector<std::size_t> log_states(const CompiledPredicate& p) {
  std::vector<std::size_t> out;
  for (const auto& e : p.log) out.push_back(e.states);
  return out;
}

std::size_t states_of(const CompiledPredicate& p, const std::string& text) {
  for (const auto& e : p.log)
    if (e.text == text) return e.states;
  FAIL("no log entry for " << text);
  return 0;
}

// Direct evaluation over the morphic prefix. Quantifiers range over
// [0, range]; the random formulas below guard every quantifier, so the
// bounded range decides them exactly.
struct Naive {
  const Letters& t = tribonacci_prefix(1 << 12);
  std::uint64_t range;

  std::optional<std::uint64_t> term(const Term& x, std::map<std::string, std::uint64_t>& env) const {
    switch (x.kind) {
      case Term::Kind::Var: return env.at(x.name);
      case Term::Kind::Const: return to_u64(x.value);
      case Term::Kind::Add: {
        auto a = term(*x.lhs, env), b = term(*x.rhs, env);
        if (!a || !b) return std::nullopt;
        return *a + *b;
      }
      case Term::Kind::Sub: {
        auto a = term(*x.lhs, env), b = term(*x.rhs, env);
        if (!a || !b || *a < *b) return std::nullopt;
        return *a - *b;
      }
      case Term::Kind::Scale: {
        auto b = term(*x.rhs, env);
        if (!b) return std::nullopt;
        return to_u64(x.value) * *b;
      }
    }
    return std::nullopt;
  }

  static bool cmp(CmpOp op, std::uint64_t a, std::uint64_t b) {
    switch (op) {
      case CmpOp::Eq: return a == b;
      case CmpOp::Ne: return a != b;
      case CmpOp::Lt: return a < b;
      case CmpOp::Le: return a <= b;
      case CmpOp::Gt: return a > b;
      case CmpOp::Ge: return a >= b;
    }
    return false;
  }

  bool holds(const Formula& f, std::map<std::string, std::uint64_t>& env) const {
    switch (f.kind) {
      case Formula::Kind::Compare: {
        // Subtraction is a relation: an undefined difference makes the atom false.
        auto a = term(*f.lhs, env), b = term(*f.rhs, env);
        return a && b && cmp(f.op, *a, *b);
      }
      case Formula::Kind::SeqCompare: {
        auto letter = [&](const SeqOperand& o) -> std::optional<std::uint64_t> {
          if (o.sequence.empty()) return static_cast<std::uint64_t>(o.letter);
          auto i = term(*o.index, env);
          if (!i) return std::nullopt;
          return t.at(*i);
        };
        auto a = letter(f.seq_lhs), b = letter(f.seq_rhs);
        return a && b && cmp(f.op, *a, *b);
      }
      case Formula::Kind::Not: return !holds(*f.left, env);
      case Formula::Kind::And: return holds(*f.left, env) && holds(*f.right, env);
      case Formula::Kind::Or: return holds(*f.left, env) || holds(*f.right, env);
      case Formula::Kind::Implies: return !holds(*f.left, env) || holds(*f.right, env);
      case Formula::Kind::Iff: return holds(*f.left, env) == holds(*f.right, env);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        const bool exists = f.kind == Formula::Kind::Exists;
        std::function<bool(std::size_t)> over = [&](std::size_t k) -> bool {
          if (k == f.vars.size()) return holds(*f.left, env);
          const auto saved = env.find(f.vars[k]) != env.end() ? std::optional(env[f.vars[k]]) : std::nullopt;
          bool result = !exists;
          for (std::uint64_t v = 0; v <= range; ++v) {
            env[f.vars[k]] = v;
            if (over(k + 1) == exists) {
              result = exists;
              break;
            }
          }
          if (saved) env[f.vars[k]] = *saved;
          else env.erase(f.vars[k]);
          return result;
        };
        return over(0);
      }
      case Formula::Kind::Reference: break;
    }
    throw std::logic_error("unsupported formula");
  }
};

// Random formulas over free x, y with guarded quantifiers over u, v.
struct Generator {
  std::mt19937 rng;
  std::vector<std::string> vars{"x", "y"};

  std::string pick() { return vars[rng() % vars.size()]; }

  std::string term() {
    switch (rng() % 5) {
      case 0: return std::to_string(rng() % 6);
      case 1: return pick() + " + " + std::to_string(1 + rng() % 3);
      case 2: return pick() + " + " + pick();
      case 3: return std::to_string(2 + rng() % 2) + " * " + pick();
      default: return pick();
    }
  }

  std::string atom() {
    static const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
    if (rng() % 3 == 0) {
      const char* op = rng() % 2 ? "=" : "!=";
      if (rng() % 3 == 0) return "T[" + term() + "] " + op + " " + std::to_string(rng() % 3);
      return "T[" + term() + "] " + op + " T[" + term() + "]";
    }
    return term() + " " + ops[rng() % 6] + " " + term();
  }

  std::string formula(int depth) {
    if (depth == 0) return atom();
    switch (rng() % 7) {
      case 0: return "~(" + formula(depth - 1) + ")";
      case 1: return "(" + formula(depth - 1) + ") & (" + formula(depth - 1) + ")";
      case 2: return "(" + formula(depth - 1) + ") | (" + formula(depth - 1) + ")";
      case 3: return "(" + formula(depth - 1) + ") => (" + formula(depth - 1) + ")";
      case 4: return "(" + formula(depth - 1) + ") <=> (" + formula(depth - 1) + ")";
      default: {
        if (vars.size() > 3) return atom();
        const std::string v = vars.size() == 2 ? "u" : "v";
        const std::string bound = pick() + " + " + std::to_string(rng() % 4);
        vars.push_back(v);
        const std::string body = formula(depth - 1);
        vars.pop_back();
        return rng() % 2 ? "E" + v + " (" + v + " <= " + bound + " & (" + body + "))"
                         : "A" + v + " (" + v + " <= " + bound + " => (" + body + "))";
      }
    }
  }
};

}  // namespace

TEST_SUITE("logic") {
  TEST_CASE("precedence and scope") {
    const auto f = parse("p >= 1 & En Ai i >= n => TR[i] = TR[i + p]");
    REQUIRE(f->kind == Formula::Kind::And);
    CHECK(f->left->kind == Formula::Kind::Compare);
    const auto& e = *f->right;
    REQUIRE(e.kind == Formula::Kind::Exists);
    REQUIRE(e.left->kind == Formula::Kind::Forall);
    CHECK(e.left->left->kind == Formula::Kind::Implies);
    CHECK(e.left->left->right->kind == Formula::Kind::SeqCompare);

    const auto g = parse("x = 1 => y = 1 => z = 1");
    REQUIRE(g->kind == Formula::Kind::Implies);
    CHECK(g->right->kind == Formula::Kind::Implies);

    const auto h = parse("x = 1 | y = 1 & z = 1 <=> ~x = 2");
    REQUIRE(h->kind == Formula::Kind::Iff);
    CHECK(h->left->kind == Formula::Kind::Or);
    CHECK(h->left->right->kind == Formula::Kind::And);
    CHECK(h->right->kind == Formula::Kind::Not);
  }

  TEST_CASE("terms") {
    const auto f = parse("m = 3 * n");
    REQUIRE(f->rhs->kind == Term::Kind::Scale);
    CHECK(f->rhs->value == 3);
    CHECK(f->rhs->rhs->kind == Term::Kind::Var);
    CHECK(to_text(*f) == "m = 3 * n");
  }

  TEST_CASE("syntax errors") {
    CHECK_THROWS_AS(parse("x + ("), ParseError);
    CHECK_THROWS_AS(parse("x * y = 1"), ParseError);
    const std::set<std::string> known{"T"};
    CHECK_THROWS_AS(parse("Q[n] = 0", &known), ParseError);
    CHECK_THROWS_AS(compile("Ex", test::environment()), ParseError);
    try {
      parse("x = = 1");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 4);
    }
  }

  TEST_CASE("aperiodicity log") {
    const auto env = test::environment();
    Environment tr = env;
    tr.sequences.emplace("TR", tribonacci_dfao());
    const auto p = compile("p >= 1 & En Ai i >= n => TR[i] = TR[i + p]", tr);
    CHECK(is_empty(p.dfa));
    CHECK(states_of(p, "p >= 1") == 5);
    CHECK(states_of(p, "i >= n") == 13);
    CHECK(states_of(p, "i + p") == 150);
    CHECK(states_of(p, "TR[i] = TR[i + p]") == 102);
    CHECK(states_of(p, "Ai i >= n => TR[i] = TR[i + p]") == 4);
    CHECK(states_of(p, "En Ai i >= n => TR[i] = TR[i + p]") == 2);
    CHECK(p.log.size() == 8);
  }

  TEST_CASE("squares log") {
    const auto p = compile("n > 0 & Ei Aj i <= j & j < i + n => T[j] = T[j + n]", test::environment());
    CHECK(log_states(p) == std::vector<std::size_t>{5, 13, 150, 229, 241, 150, 102, 1743, 11, 4, 4});
    CHECK(language_equal(p.dfa, test::kernel().regex("10*+110*")));
    CHECK(p.free_tracks == std::vector<std::string>{"n"});
    const std::string log = format_log(p, false);
    CHECK(log.find("  i + n with 150 states\n") != std::string::npos);
    CHECK(log.find("overall time") == std::string::npos);
    CHECK(format_log(p, true).find("overall time: ") != std::string::npos);
  }

  TEST_CASE("fourth powers log") {
    const auto p = compile("n > 0 & Ei Aj i <= j & j < i + 3 * n => T[j] = T[j + n]", test::environment());
    CHECK(is_empty(p.dfa));
    CHECK(states_of(p, "3 * n") == 147);
    CHECK(states_of(p, "i + 3 * n") == 799);
    CHECK(states_of(p, "j < i + 3 * n") == 1103);
    CHECK(states_of(p, "i <= j & j < i + 3 * n") == 1115);
    CHECK(p.peak_states < 1'000'000);
  }

  TEST_CASE("trivial predicates") {
    const auto env = test::environment();
    const Kernel& k = test::kernel();
    CHECK(language_equal(compile("x = x", env).dfa, k.universe({"x"})));
    CHECK(language_equal(compile("T[i] = T[i]", env).dfa, k.universe({"i"})));
    CHECK(language_equal(compile("y = x - x", env, {"x", "y"}).dfa,
                         k.intersect(k.universe({"x"}), k.constant(0, "y"))));
    CHECK(compile("Ex x < 3", env).dfa.truth());
    CHECK_FALSE(compile("Ax x < 3", env).dfa.truth());
  }

  TEST_CASE("sum and scale atoms") {
    const auto env = test::environment();
    const auto sum = compile("i + p = s", env);
    CHECK(test::decode(sum.dfa, 60).size() == 61 * 62 / 2);
    const auto triple = compile("m = 3 * n", env, {"n", "m"});
    const auto got = test::decode(triple.dfa, 6000);
    test::Tuples want;
    for (std::uint64_t n = 0; n <= 2000; ++n) want.insert({n, 3 * n});
    CHECK(got == want);
  }

  TEST_CASE("letter comparisons agree with the word") {
    const auto env = test::environment();
    const auto p = compile("T[i + t] < T[i + j + t]", env, {"i", "j", "t"});
    const Letters& w = tribonacci_prefix(1000);
    test::Tuples want;
    for (std::uint64_t i = 0; i <= 30; ++i)
      for (std::uint64_t j = 0; j <= 30; ++j)
        for (std::uint64_t t = 0; t <= 30; ++t)
          if (w[i + t] < w[i + j + t]) want.insert({i, j, t});
    CHECK(test::decode(p.dfa, 30) == want);
    std::mt19937 rng(1);
    for (int round = 0; round < 3000; ++round) {
      const std::uint64_t i = rng() % 201, j = rng() % 201, t = rng() % 201;
      const Natural v[] = {natural(i), natural(j), natural(t)};
      REQUIRE(test::kernel().accepts(p.dfa, v) == (w[i + t] < w[i + j + t]));
    }
    CHECK_THROWS(compile("T[i] = 3", env));
  }

  TEST_CASE("random formulas agree with direct evaluation") {
    const auto env = test::environment();
    Generator gen{std::mt19937(2024)};
    const Naive naive{tribonacci_prefix(1 << 12), 40};
    for (int round = 0; round < 60; ++round) {
      const std::string text = gen.formula(3);
      CAPTURE(text);
      const auto p = compile(text, env, {"x", "y"});
      const auto f = parse(text);
      const auto got = test::decode(p.dfa, 12);
      test::Tuples want;
      std::map<std::string, std::uint64_t> values;
      for (std::uint64_t x = 0; x <= 12; ++x)
        for (std::uint64_t y = 0; y <= 12; ++y) {
          values["x"] = x;
          values["y"] = y;
          if (naive.holds(*f, values)) want.insert({x, y});
        }
      REQUIRE(got == want);
    }
  }

  TEST_CASE("universal and negated existential quantifiers agree") {
    const auto env = test::environment();
    Generator gen{std::mt19937(77)};
    for (int round = 0; round < 25; ++round) {
      gen.vars = {"x", "y", "z"};
      const std::string body = gen.formula(2);
      CAPTURE(body);
      const auto a = compile("Az (" + body + ")", env, {"x", "y"});
      const auto b = compile("~Ez ~(" + body + ")", env, {"x", "y"});
      REQUIRE(language_equal(a.dfa, b.dfa));
    }
  }

  TEST_CASE("variable order only permutes tracks") {
    const auto env = test::environment();
    const auto a = compile("x < y & T[x] = T[y]", env);
    const auto b = compile("T[y] = T[x] & y > x", env);
    CHECK(a.free_tracks == std::vector<std::string>{"x", "y"});
    CHECK(b.free_tracks == std::vector<std::string>{"y", "x"});
    CHECK(language_equal(a.dfa, b.dfa));
    const Dfa swapped = reorder(b.dfa, {"x", "y"});
    CHECK(swapped.tracks() == a.dfa.tracks());
    CHECK(swapped.num_states() == a.dfa.num_states());
  }

  TEST_CASE("explicit parameters and references") {
    auto env = test::environment();
    env.predicates["per"] = compile("Aj (j + p < n) => T[j] = T[j + p]", env, {"n", "p"});
    CHECK(env.predicates["per"].free_tracks == std::vector<std::string>{"n", "p"});
    const auto ice = compile("p >= 1 & $per(n, p) & Aq (q >= 1 & q < p) => ~$per(n, q)", env, {"n", "p"});
    CHECK(ice.dfa.num_states() == 13);
    CHECK_THROWS_AS(compile("x < y", env, {"x"}), CompileError);
    // An unused parameter is unconstrained.
    const auto free = compile("x < 2", env, {"x", "unused"});
    CHECK(test::decode(free.dfa, 5).size() == 2 * 6);
  }

  TEST_CASE("resource errors carry the subexpression") {
    Environment env = test::environment();
    env.limits.max_states = 500;
    try {
      compile("n > 0 & Ei Aj i <= j & j < i + n => T[j] = T[j + n]", env);
      FAIL("expected a resource error");
    } catch (const CompileError& e) {
      CHECK(e.resource());
      CHECK_FALSE(e.subexpression().empty());
    }
  }
}
