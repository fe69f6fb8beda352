#include <doctest.h>

#include <cmath>
#include <regex>

#include "support.hpp"
#include "tribo/corpus.hpp"
#include "tribo/oracles.hpp"

using namespace tribo;

namespace {

Letters letters(const std::string& s) {
  Letters w;
  for (char c : s) w.push_back(static_cast<std::uint8_t>(c - '0'));
  return w;
}

const TheoremCase& find(const std::string& slug) {
  for (const auto& c : catalogue())
    if (c.slug == slug) return c;
  FAIL("no case " << slug);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("oracles on small words") {
    const Letters t = tribonacci_prefix(100);
    CHECK(oracle::prefix_least_periods(t, 2)[2] == 2);
    CHECK(oracle::prefix_least_periods(letters("0101"), 4)[4] == 2);
    CHECK(oracle::parikh(t, 13) == std::array<std::uint64_t, 3>{7, 4, 2});
    CHECK(oracle::power_orders(letters("0010"), 2, 5) == std::set<std::size_t>{1});
    CHECK(oracle::count_power_occurrences(letters("0000"), 4, 2) == 4);
    CHECK(oracle::max_even_palindrome_radius(letters("01100")) == 2);
    CHECK(oracle::max_odd_palindrome_radius(letters("01210")) == 2);
    CHECK(oracle::palindromic_prefixes(letters("0102010"), 7) == std::set<std::size_t>{0, 1, 3, 7});
    CHECK(oracle::unbordered_lengths(letters("0010"), 1, 3) == std::set<std::size_t>{1, 3});
    CHECK(oracle::lyndon_lengths(letters("0101"), 1, 3) == std::set<std::size_t>{1, 2});
    CHECK(oracle::power_prefixes(letters("010101"), 6) == std::set<std::size_t>{4, 6});
  }

  TEST_CASE("catalogue shape") {
    const auto& cases = catalogue();
    REQUIRE(cases.size() == 17);
    std::set<std::string> slugs;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      CHECK(cases[i].id == static_cast<int>(i + 1));
      CHECK_FALSE(cases[i].expectations.empty());
      slugs.insert(cases[i].slug);
    }
    CHECK(slugs.size() == 17);
  }

  TEST_CASE("fast cases pass") {
    CorpusOptions options;
    options.skip_slow = true;
    const auto reports = run_all(options);
    REQUIRE(reports.size() == 17);
    for (const auto& r : reports) {
      CAPTURE(r.slug);
      CAPTURE(r.witness);
      const bool slow = catalogue()[r.id - 1].slow;
      CHECK(r.status == (slow ? CaseStatus::Skipped : CaseStatus::Pass));
    }
    const std::string lines = format_lines(reports);
    CHECK(lines.find("1 pass") != std::string::npos);
    CHECK(lines.find("7 skipped") != std::string::npos);
    const std::string table = format_table(reports, false);
    CHECK(table.find("12/12 passed (5 skipped)") != std::string::npos);
    CHECK_FALSE(std::regex_search(table, std::regex(R"([0-9]\.[0-9]+s)")));
  }

  TEST_CASE("a wrong expectation fails with a witness") {
    TheoremCase bad = find("square-orders");
    bool changed = false;
    for (auto& e : bad.expectations)
      if (e.kind == Expectation::Kind::Language) {
        e.regex = "10*+1100*";
        changed = true;
      }
    REQUIRE(changed);
    const CaseReport r = run_case(bad);
    CHECK(r.status == CaseStatus::Fail);
    CHECK_FALSE(r.witness.empty());

    TheoremCase broken = find("aperiodic");
    broken.definitions.front().query = "p >= 1 & Q[p] = 0";
    CHECK(run_case(broken).status == CaseStatus::Error);

    const CaseReport starved = run_case(find("fourth-powers"), Limits{1000});
    CHECK(starved.status == CaseStatus::Error);
    CHECK(starved.witness == "budget");
  }

  TEST_CASE("largest accepted value") {
    const Kernel& k = test::kernel();
    CHECK(max_accepted(k.regex("10*")) == std::nullopt);
    CHECK(max_accepted(k.constant(0, "x")) == Natural(0));
    const auto p = compile("x < 1000 & T[x] = 2", test::environment());
    const Letters& t = tribonacci_prefix(1000);
    std::uint64_t want = 999;
    while (t[want] != 2) --want;
    CHECK(max_accepted(p.dfa) == natural(want));
    CHECK(max_accepted(compile("x < 0", test::environment()).dfa) == std::nullopt);
  }

  TEST_CASE("cubic root") {
    const long double r = critical_exponent_root();
    CHECK(std::fabs(static_cast<double>(2 * r * r * r - 12 * r * r + 22 * r - 13)) < 1e-12);
    CHECK(r == doctest::Approx(3.19148788395311874706).epsilon(1e-12));
  }
}
