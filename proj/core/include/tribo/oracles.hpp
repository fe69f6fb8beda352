#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "tribo/word.hpp"

// Naive string scans over a finite prefix of an infinite word. They answer
// the same questions as the corpus predicates without any automata, so the
// two can be compared. A scan only sees what occurs inside `w`; callers pick
// prefixes long enough for the bounds they ask about.
namespace tribo::oracle {

/// Periods p <= max_order such that w contains a factor of length k*p with period p.
std::set<std::size_t> power_orders(const Letters& w, unsigned k, std::size_t max_order);

/// (p, i) with p, i <= bound and w[i..i+k*p) of period p.
std::set<std::pair<std::size_t, std::size_t>> power_positions(const Letters& w, unsigned k,
                                                              std::size_t bound);

/// #{(i, j) : j >= 1, i + k*j <= n, w[i..i+k*j) has period j}.
std::uint64_t count_power_occurrences(const Letters& w, std::size_t n, unsigned k);

/// Largest r such that w has a palindrome of length 2r (even) or 2r+1 (odd).
std::size_t max_even_palindrome_radius(const Letters& w);
std::size_t max_odd_palindrome_radius(const Letters& w);

/// n <= max_n (n <= |w|) with w[0..n) a palindrome, including 0.
std::set<std::size_t> palindromic_prefixes(const Letters& w, std::size_t max_n);

/// Prefix lengths 1 <= n <= max_n whose occurrences cover w with gaps of at
/// most n; gaps reaching past the end of w are not held against n.
std::set<std::size_t> quasiperiods(const Letters& w, std::size_t max_n);

/// Lengths 1 <= n <= max_n of unbordered factors starting before `starts`.
std::set<std::size_t> unbordered_lengths(const Letters& w, std::size_t starts, std::size_t max_n);

/// Lengths 1 <= n <= max_n of factors starting before `starts` that are
/// strictly smaller than each of their proper suffixes.
std::set<std::size_t> lyndon_lengths(const Letters& w, std::size_t starts, std::size_t max_n);

/// result[n] = least period of w[0..n) for 1 <= n <= max_n; result[0] = 1.
std::vector<std::size_t> prefix_least_periods(const Letters& w, std::size_t max_n);

/// n <= max_n such that w[0..n) is x^e for a word x and an integer e >= 2.
std::set<std::size_t> power_prefixes(const Letters& w, std::size_t max_n);

/// Letter counts of w[0..n).
std::array<std::uint64_t, 3> parikh(const Letters& w, std::size_t n);

}  // namespace tribo::oracle
