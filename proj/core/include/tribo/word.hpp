#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tribo/bignum.hpp"
#include "tribo/dfa.hpp"
#include "tribo/numeration.hpp"

namespace tribo {

/// Letters are small non-negative integers.
using Letters = std::vector<std::uint8_t>;

struct Morphism {
  std::vector<Letters> images;  // images[a] = image of letter a
  std::vector<int> coding;      // output letter per letter; identity when empty
  int start = 0;
};

/// 0 -> 01, 1 -> 02, 2 -> 0.
Morphism tribonacci_morphism();
/// "0->01,1->02,2->0", optionally followed by ";start=0" and ";coding=0,1,1".
Morphism parse_morphism(std::string_view spec);

/// First `length` letters of the coded fixed point of m.
Letters morphic_prefix(const Morphism& m, std::size_t length);
/// The Tribonacci word T, cached and grown on demand.
const Letters& tribonacci_prefix(std::size_t length);

/// Y_0 = ε, Y_1 = 2, Y_2 = 0, Y_3 = 01, Y_n = Y_{n-1} Y_{n-2} Y_{n-3}.
std::string finite_word(unsigned n);

std::string letters_text(const Letters& w);

/// Learns a DFAO for a word from a prefix of it: states are told apart by
/// their outputs on short suffixes, with invalid representations treated as
/// don't-cares. The result is minimized and checked on every index below
/// `verify_below` (which must not exceed the prefix length).
Dfao learn_dfao(const NumerationSystem& ns, const Letters& prefix, std::size_t verify_below);

/// 3-state DFAO for T, learned from the morphic prefix and verified for
/// n < 10^6.
const Dfao& tribonacci_dfao();

/// Replaces outputs by f(output) and minimizes.
Dfao dfao_map(const Dfao& d, const std::function<int(int)>& f);

int word_at(const Dfao& d, const Natural& n, const NumerationSystem& ns = tribonacci_system());

}  // namespace tribo
