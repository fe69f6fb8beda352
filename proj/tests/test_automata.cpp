#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>
#include <regex>

#include "support.hpp"
#include "tribo/oracles.hpp"

using namespace tribo;

namespace {

using Tuples = std::set<std::vector<std::uint64_t>>;

Dfa random_dfa(std::mt19937& rng, std::vector<std::string> tracks, std::size_t n) {
  const std::size_t k = std::size_t{1} << tracks.size();
  std::vector<State> delta(n * k);
  for (auto& t : delta) t = static_cast<State>(rng() % n);
  std::vector<std::uint8_t> acc(n);
  for (auto& a : acc) a = rng() % 3 == 0;
  return Dfa(std::move(tracks), n, 0, std::move(delta), std::move(acc));
}

// Calls visit(word, state) for every word of length <= max_len, depth first.
void for_each_word(const Dfa& a, std::size_t max_len,
                   const std::function<void(const std::vector<Symbol>&, State)>& visit) {
  std::vector<Symbol> w;
  std::function<void(State)> go = [&](State q) {
    visit(w, q);
    if (w.size() == max_len) return;
    for (Symbol s = 0; s < a.alphabet_size(); ++s) {
      w.push_back(s);
      go(a.next(q, s));
      w.pop_back();
    }
  };
  go(a.initial());
}

Tuples pairs_where(std::uint64_t bound, const std::function<bool(std::uint64_t, std::uint64_t)>& p) {
  Tuples out;
  for (std::uint64_t x = 0; x <= bound; ++x)
    for (std::uint64_t y = 0; y <= bound; ++y)
      if (p(x, y)) out.insert({x, y});
  return out;
}

// Deliberately small DOT checker: one statement per line inside digraph { }.
bool dot_well_formed(const std::string& text) {
  static const std::regex header(R"(digraph\s+"?[\w ]*"?\s*\{)");
  static const std::regex statement(
      R"(\s*(rankdir=LR;|node \[[^\]]*\];|"?[\w#]+"?(\s*->\s*"?[\w#]+"?)?)"
      R"((\s*\[(\w+=("[^"]*"|\w+),?\s*)*\])?;)\s*)");
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || !std::regex_match(line, header)) return false;
  bool closed = false;
  while (std::getline(in, line)) {
    if (closed) return line.empty();
    if (line == "}") {
      closed = true;
      continue;
    }
    if (!std::regex_match(line, statement)) return false;
  }
  return closed;
}

}  // namespace

TEST_SUITE("automata") {
  TEST_CASE("product and complement identities") {
    const Kernel& k = test::kernel();
    const Dfa squares = k.regex("10*+110*");
    CHECK(language_equal(k.intersect(squares, squares), squares));
    CHECK(is_empty(k.intersect(squares, k.complement(squares))));
    CHECK(language_equal(k.complement(k.complement(squares)), squares));
    CHECK(language_equal(k.complement(k.empty({"n"})), k.universe({"n"})));

    const Dfa lt = k.less_than("x", "y");
    const Dfa gt = k.less_than("y", "x");
    CHECK(language_equal(k.intersect(k.complement(lt), k.complement(gt)), k.equal("x", "y")));
    CHECK(test::decode(k.intersect(k.complement(lt), k.complement(gt)), 500) ==
          pairs_where(500, [](auto x, auto y) { return x == y; }));
  }

  TEST_CASE("De Morgan on random automata") {
    const Kernel& k = test::kernel();
    std::mt19937 rng(11);
    for (int round = 0; round < 40; ++round) {
      const Dfa a = k.pad_closure(random_dfa(rng, {"x", "y"}, 2 + rng() % 5));
      const Dfa b = k.pad_closure(random_dfa(rng, {"y", "z"}, 2 + rng() % 5));
      const Dfa lhs = k.complement(k.product(a, b, kAnd));
      const Dfa rhs = k.product(k.complement(a), k.complement(b), kOr);
      REQUIRE(language_equal(lhs, rhs));
    }
  }

  TEST_CASE("tracks are unified by name") {
    const Kernel& k = test::kernel();
    const Dfa chain = k.intersect(k.less_than("x", "y"), k.less_than("y", "z"));
    CHECK(chain.tracks() == std::vector<std::string>{"x", "y", "z"});
    const Dfa xz = k.exists(chain, "y");
    CHECK(test::decode(xz, 200) == pairs_where(200, [](auto x, auto z) { return x + 2 <= z; }));
  }

  TEST_CASE("projection") {
    const Kernel& k = test::kernel();
    CHECK(language_equal(k.exists(k.addition("x", "y", "z"), "z"), k.universe({"x", "y"})));
    CHECK(language_equal(k.exists(k.less_than("x", "y"), "y"), k.universe({"x"})));
    // Witnesses longer than the free variable: x < y for y huge.
    const Dfa big = k.intersect(k.less_than("x", "y"), k.constant(tribonacci(60), "y"));
    CHECK(test::decode(k.exists(big, "y"), 300).size() == 301);
    // x <= z by way of x + y = z.
    CHECK(test::decode(k.exists(k.addition("x", "y", "z"), "y"), 150) ==
          pairs_where(150, [](auto x, auto z) { return x <= z; }));
    CHECK(k.exists(k.exists(k.less_than("x", "y"), "x"), "y").truth());
    CHECK_FALSE(k.exists(k.exists(k.intersect(k.less_than("x", "y"), k.less_than("y", "x")), "x"), "y").truth());
  }

  TEST_CASE("determinization agrees with path enumeration on random NFAs") {
    const Kernel& k = test::kernel();
    std::mt19937 rng(3);
    for (int round = 0; round < 100; ++round) {
      const std::size_t n = 8, alphabet = 4;
      std::vector<std::uint32_t> offsets{0};
      std::vector<State> targets;
      std::vector<std::uint8_t> step(n * alphabet, 0);  // successor sets as bitmasks
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t s = 0; s < alphabet; ++s) {
          for (State t = 0; t < n; ++t)
            if (rng() % 5 == 0) {
              targets.push_back(t);
              step[q * alphabet + s] |= static_cast<std::uint8_t>(1U << t);
            }
          offsets.push_back(static_cast<std::uint32_t>(targets.size()));
        }
      std::vector<std::uint8_t> acc(n);
      std::uint8_t acc_mask = 0;
      for (std::size_t q = 0; q < n; ++q)
        if ((acc[q] = rng() % 3 == 0)) acc_mask |= static_cast<std::uint8_t>(1U << q);
      std::vector<State> initial{0};
      std::uint8_t init_mask = 1;
      if (rng() % 2) {
        initial.push_back(5);
        init_mask |= 1U << 5;
      }
      const Nfa nfa({"a", "b"}, n, initial, offsets, targets, acc);
      const Dfa dfa = k.determinize(nfa);

      bool agree = true;
      std::vector<std::uint8_t> masks{init_mask};
      for_each_word(dfa, 10, [&](const std::vector<Symbol>& w, State q) {
        masks.resize(w.size() + 1);
        if (!w.empty()) {
          std::uint8_t m = 0;
          for (std::size_t p = 0; p < n; ++p)
            if (masks[w.size() - 1] >> p & 1) m |= step[p * alphabet + w.back()];
          masks[w.size()] = m;
        }
        agree = agree && dfa.is_accepting(q) == ((masks[w.size()] & acc_mask) != 0);
      });
      REQUIRE(agree);
    }
  }

  TEST_CASE("minimization of random automata") {
    std::mt19937 rng(5);
    for (int round = 0; round < 200; ++round) {
      const Dfa a = random_dfa(rng, {"n"}, 1 + rng() % 12);
      const Dfa m = minimize(a);
      CHECK(m.num_states() <= a.num_states());
      CHECK(minimize(m).num_states() == m.num_states());
      CHECK(serialize(minimize(m)) == serialize(m));
      std::vector<bool> by_a, by_m;
      for_each_word(a, 10, [&](const std::vector<Symbol>&, State q) { by_a.push_back(a.is_accepting(q)); });
      for_each_word(m, 10, [&](const std::vector<Symbol>&, State q) { by_m.push_back(m.is_accepting(q)); });
      REQUIRE(by_a == by_m);
    }
  }

  TEST_CASE("equal languages serialize identically") {
    std::mt19937 rng(9);
    for (int round = 0; round < 50; ++round) {
      const Dfa a = random_dfa(rng, {"x", "y"}, 2 + rng() % 8);
      // Same automaton with states renumbered by a random permutation.
      std::vector<State> perm(a.num_states());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<State> delta(a.transitions().size());
      std::vector<std::uint8_t> acc(a.num_states());
      for (State q = 0; q < a.num_states(); ++q) {
        acc[perm[q]] = a.is_accepting(q);
        for (Symbol s = 0; s < 4; ++s) delta[perm[q] * 4 + s] = perm[a.next(q, s)];
      }
      const Dfa b({"x", "y"}, a.num_states(), perm[a.initial()], delta, acc);
      CHECK(language_equal(a, b));
      CHECK(serialize(minimize(a)) == serialize(minimize(b)));
      CHECK(serialize(parse_automaton(serialize(minimize(a)))) == serialize(minimize(a)));
    }
  }

  TEST_CASE("enumerate") {
    const Kernel& k = test::kernel();
    std::vector<Natural> firsts;
    for (const auto& t : k.enumerate(k.regex("10*+110*"), 6)) firsts.push_back(t.at(0));
    CHECK(firsts == std::vector<Natural>{1, 2, 3, 4, 6, 7});
    CHECK(k.enumerate(k.empty({"n"}), 10).empty());
    CHECK(k.enumerate(k.regex("e"), 10) == std::vector<std::vector<Natural>>{{0}});
  }

  TEST_CASE("pad closure") {
    const Kernel& k = test::kernel();
    // A chain accepting exactly zip(9, 16) and nothing else.
    const Natural v[] = {9, 16};
    const auto word = zip(v);
    const std::size_t n = word.size() + 2;
    std::vector<State> delta(n * 4, static_cast<State>(n - 1));
    for (std::size_t i = 0; i < word.size(); ++i) delta[i * 4 + word[i]] = static_cast<State>(i + 1);
    std::vector<std::uint8_t> acc(n, 0);
    acc[word.size()] = 1;
    const Dfa single({"x", "y"}, n, 0, delta, acc);
    CHECK_FALSE(single.accepts(std::vector<Symbol>{0, word[0], word[1], word[2], word[3], word[4]}));
    const Dfa closed = k.pad_closure(single);
    for (std::size_t pad = 0; pad < 6; ++pad) {
      std::vector<Symbol> w(pad, 0);
      w.insert(w.end(), word.begin(), word.end());
      CHECK(closed.accepts(w));
    }
    CHECK(test::decode(closed, 1000) == test::Tuples{{9, 16}});
    CHECK(language_equal(k.pad_closure(closed), closed));
    CHECK(language_equal(k.pad_closure(k.less_than("x", "y")), k.less_than("x", "y")));
  }

  TEST_CASE("regular expressions") {
    const Kernel& k = test::kernel();
    CHECK(test::decode(k.regex("e"), 100) == test::Tuples{{0}});
    CHECK(test::decode(k.regex("ε"), 100) == test::Tuples{{0}});
    const Dfa pal = k.regex("1+11+10(010)*(00+001+0011)");
    std::set<std::vector<std::uint64_t>> want;
    for (auto n : oracle::palindromic_prefixes(tribonacci_prefix(5000), 5000))
      if (n > 0) want.insert({n});
    CHECK(test::decode(pal, 5000) == want);
    CHECK_THROWS_AS(k.regex("1+("), FormatError);
    CHECK_THROWS_AS(k.regex("12"), FormatError);
  }

  TEST_CASE("dot export") {
    const Dfa one = Dfa::constant(true, {"n"});
    const std::string dot = to_dot(one);
    CHECK(dot_well_formed(dot));
    std::size_t doubled = 0;
    for (auto p = dot.find("doublecircle"); p != std::string::npos; p = dot.find("doublecircle", p + 1)) ++doubled;
    CHECK(doubled == 1);

    const std::string tdot = to_dot(tribonacci_dfao(), "T");
    CHECK(dot_well_formed(tdot));
    const std::regex label(R"re(label="(\d+)/(\d+)")re");
    std::set<std::string> outputs;
    std::size_t nodes = 0;
    for (std::sregex_iterator it(tdot.begin(), tdot.end(), label), end; it != end; ++it, ++nodes)
      outputs.insert((*it)[2]);
    CHECK(nodes == 3);
    CHECK(outputs == std::set<std::string>{"0", "1", "2"});
    CHECK(dot_well_formed(to_dot(test::kernel().addition("x", "y", "z"), "add")));
  }

  TEST_CASE("state budget") {
    const Kernel small(tribonacci_system(), Limits{200});
    CHECK_THROWS_AS(small.intersect(small.addition("x", "y", "z"), small.less_than("x", "z")), ResourceError);
  }
}
