#include <doctest.h>

#include "support.hpp"
#include "tribo/enumeration.hpp"

using namespace tribo;

namespace {

Vector row(std::initializer_list<long> xs) {
  Vector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Matrix matrix(std::initializer_list<std::initializer_list<long>> rows) {
  Matrix m;
  for (const auto& r : rows) m.push_back(row(r));
  return m;
}

// 2n + 1, with the tribonacci place values carried in three coordinates.
LinRep two_n_plus_one() {
  LinRep r;
  r.u = row({0, 0, 0, 1});
  r.m0 = matrix({{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}});
  r.m1 = matrix({{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 0}, {1, 1, 0, 1}});
  r.v = row({2, 0, 0, 1});
  return r;
}

LinRep rank_twelve() {
  LinRep r;
  r.u = row({1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  r.m0 = matrix({{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                 {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                 {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
                 {-1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0},
                 {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
                 {-1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0},
                 {-2, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0},
                 {-3, 0, 2, 0, 1, 0, 1, 0, 0, 0, 0, 0},
                 {-4, 0, 2, 0, 2, 0, 1, 0, 0, 0, 0, 0},
                 {-5, 0, 2, 0, 2, 0, 2, 0, 0, 0, 0, 0},
                 {-6, 0, 2, 0, 3, 0, 2, 0, 0, 0, 0, 0},
                 {-10, 0, 3, 0, 4, 0, 4, 0, 0, 0, 0, 0}});
  r.m1 = Matrix(12, Vector(12, 0));
  const int ones[][2] = {{0, 1}, {1, 3}, {2, 5}, {4, 7}, {5, 8}, {6, 9}, {7, 10}, {9, 11}};
  for (const auto& [i, j] : ones) r.m1[i][j] = 1;
  r.v = row({1, 3, 5, 7, 9, 11, 15, 17, 21, 29, 33, 55});
  return r;
}

// Occurrences (i, j) of k-th powers of order j inside the prefix of length n,
// counted by growing n one letter at a time.
std::vector<std::uint64_t> power_counts(const Letters& w, std::size_t count, unsigned k) {
  std::vector<std::uint64_t> out(count, 0);
  for (std::size_t n = 1; n < count; ++n) {
    std::uint64_t fresh = 0;
    for (std::size_t j = 1; k * j <= n; ++j) {
      const std::size_t i = n - k * j;
      bool power = true;
      for (std::size_t t = i; power && t + j < n; ++t) power = w[t] == w[t + j];
      fresh += power;
    }
    out[n] = out[n - 1] + fresh;
  }
  return out;
}

const Letters& word() { return tribonacci_prefix(1 << 14); }

}  // namespace

TEST_SUITE("enumeration") {
  TEST_CASE("evaluation") {
    LinRep zero;
    zero.u = row({0});
    zero.m0 = matrix({{1}});
    zero.m1 = matrix({{1}});
    zero.v = row({1});
    CHECK(is_zero(zero));
    CHECK(eval(zero, natural(77)) == 0);

    const LinRep r = two_n_plus_one();
    CHECK(eval_word(r, std::vector<std::uint8_t>{}) == 1);
    CHECK(eval(r, natural(0)) == 1);
    const auto values = eval_all(r, 5000);
    for (std::uint64_t n = 0; n < 5000; ++n) REQUIRE(values[n] == Rational(2 * n + 1));
    CHECK(eval(r, tribonacci(100)) == Rational(2 * tribonacci(100) + 1));
  }

  TEST_CASE("rank twelve representation of 2n + 1") {
    const LinRep p = rank_twelve();
    const auto values = eval_all(p, 1001);
    for (std::uint64_t n = 0; n <= 1000; ++n) REQUIRE(values[n] == Rational(2 * n + 1));
    CHECK(linrep_equal(p, two_n_plus_one()).equal);
    CHECK(minimize(p).rank() <= 12);
  }

  TEST_CASE("minimization") {
    const LinRep p = rank_twelve();
    const LinRep m = minimize(p);
    CHECK(m.rank() == minimize(m).rank());
    CHECK(is_zero(difference(m, p)));
    CHECK(is_zero(difference(p, p)));
    CHECK(minimize(difference(p, p)).rank() == 0);
  }

  TEST_CASE("comparison reports the least differing index") {
    const LinRep a = two_n_plus_one();
    LinRep b = a;
    // A change in M1 leaves every n below the first representation with two
    // ones untouched.
    b.m1[3] = row({1, 1, 1, 1});
    const Comparison c = linrep_equal(a, b);
    CHECK_FALSE(c.equal);
    REQUIRE(c.witness);
    const auto va = eval_all(a, 100), vb = eval_all(b, 100);
    std::uint64_t first = 0;
    while (va[first] == vb[first]) ++first;
    CHECK(first > 1);
    CHECK(*c.witness == first);
    CHECK(linrep_equal(a, a).equal);
  }

  TEST_CASE("witnesses longer than the parameter") {
    const auto p = compile("x > n & x < 2 * n", test::environment(), {"n", "x"});
    const LinRep r = minimize(linrep_from_dfa(p.dfa, "n"));
    const auto values = eval_all(r, 10'001);
    for (std::uint64_t n = 0; n <= 10'000; ++n) REQUIRE(values[n] == Rational(n > 0 ? n - 1 : 0));
    const auto infinite = compile("x > n", test::environment(), {"n", "x"});
    CHECK_THROWS_AS(linrep_from_dfa(infinite.dfa, "n"), std::runtime_error);
  }

  TEST_CASE("square and cube occurrence counts") {
    const auto env = test::environment();
    for (unsigned k : {2u, 3u}) {
      CAPTURE(k);
      const std::string kj = std::to_string(k) + " * j", end = std::to_string(k - 1) + " * j";
      const auto p = compile("(j >= 1) & (i + " + kj + " <= n) & Au (u >= i & u < i + " + end +
                                 ") => T[u] = T[u + j]",
                             env, {"n", "i", "j"});
      const LinRep r = minimize(linrep_from_dfa(p.dfa, "n"));
      const auto got = eval_all(r, 3001);
      const auto want = power_counts(word(), 3001, k);
      for (std::size_t n = 0; n <= 3000; ++n) REQUIRE(got[n] == Rational(want[n]));
    }
  }

  TEST_CASE("polynomials") {
    const Polynomial x = Polynomial::x(), one = Polynomial::constant(1);
    const Polynomial tribo = x.pow(3) - x.pow(2) - x - one;
    CHECK(tribo.degree() == 3);
    CHECK(annihilates(x - one, identity_matrix(5)));
    CHECK_FALSE(annihilates(x, identity_matrix(2)));
    const LinRep r = two_n_plus_one();
    CHECK(annihilates(tribo * (x - one), r.m0));
    CHECK_FALSE(annihilates(tribo, r.m0));
    CHECK((x + one) * (x - one) == x.pow(2) - one);
  }

  TEST_CASE("closed form fitting") {
    std::vector<std::pair<long, Rational>> samples;
    for (long m = 5; m <= 40; ++m) samples.emplace_back(m, Rational(tribonacci(m) + 2 + 3 * m * tribonacci(m - 1)));
    const auto f = fit_closed_form(samples, false);
    REQUIRE(f);
    for (long m = 5; m <= 60; ++m) REQUIRE((*f)(m) == Rational(tribonacci(m) + 2 + 3 * m * tribonacci(m - 1)));
    samples.clear();
    for (long m = 5; m <= 40; ++m) samples.emplace_back(m, Rational(m * m));
    CHECK_FALSE(fit_closed_form(samples, false));
    samples.clear();
    for (long m = 5; m <= 40; ++m) samples.emplace_back(m, Rational(m % 3 == 0 ? 1 : 0));
    CHECK(fit_closed_form(samples, true));
    CHECK_FALSE(fit_closed_form(samples, false));
  }

  TEST_CASE("serialization") {
    const LinRep p = rank_twelve();
    CHECK(parse_linrep(serialize(p)) == p);
    LinRep q = two_n_plus_one();
    q.v[0] = Rational(1, 3);
    CHECK(parse_linrep(serialize(q)) == q);
  }
}
