#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tribo/bignum.hpp"
#include "tribo/dfa.hpp"

namespace tribo {

/// Digits most significant first. Any bit string has a value, including ones
/// with leading zeros or three consecutive ones.
using Word = std::vector<std::uint8_t>;

Word parse_word(std::string_view bits);
std::string word_text(std::span<const std::uint8_t> w);

/// Positional numeration system with place values given by a linear
/// recurrence, plus the automata deciding its arithmetic.
class NumerationSystem {
 public:
  NumerationSystem(std::string name, std::vector<Natural> recurrence, std::vector<Natural> initial,
                   Dfa addition, Dfa less_than, Dfa validity);

  const std::string& name() const { return name_; }
  /// Raw relation automata as shipped: tracks (x, y, z) and (x, y).
  const Dfa& addition() const { return addition_; }
  const Dfa& less_than() const { return less_than_; }
  /// One-track automaton for valid representations, leading zeros allowed.
  const Dfa& validity() const { return validity_; }
  const std::vector<Natural>& recurrence() const { return recurrence_; }
  const std::vector<Natural>& initial_weights() const { return initial_; }

  /// Value of the digit in position i counted from the right (0-based).
  Natural place_value(std::size_t i) const;
  Natural value_of(std::span<const std::uint8_t> w) const;
  /// Greedy expansion; empty for 0.
  Word canonical_rep(const Natural& n) const;
  /// Valid and without a leading zero.
  bool is_canonical(std::span<const std::uint8_t> w) const;

  /// Canonical representations left-padded to a common length, as columns.
  std::vector<Symbol> zip(std::span<const Natural> values) const;
  std::vector<Natural> unzip(std::span<const Symbol> columns, std::size_t arity) const;

 private:
  std::string name_;
  std::vector<Natural> recurrence_;
  std::vector<Natural> initial_;
  std::vector<Natural> weights_;
  Dfa addition_;
  Dfa less_than_;
  Dfa validity_;
};

/// Calls visit(w) with the canonical representations of 0, 1, ..., count - 1
/// in that order, generated in radix order without arithmetic.
void for_each_representation(const NumerationSystem& ns, std::size_t count,
                             const std::function<void(const Word&)>& visit);

/// T_0 = 0, T_1 = 1, T_2 = 1, T_n = T_{n-1} + T_{n-2} + T_{n-3}.
Natural tribonacci(unsigned n);

/// The built-in system, loaded from the embedded tribonacci.nsd.
const NumerationSystem& tribonacci_system();
/// The embedded definition texts.
std::string_view tribonacci_nsd_text();
std::string_view base2_nsd_text();

Natural value_of(std::span<const std::uint8_t> w);
Word canonical_rep(const Natural& n);
bool is_canonical(std::span<const std::uint8_t> w);
std::vector<Symbol> zip(std::span<const Natural> values);

/// The 44-state table as shipped (state 0 dead, state 1 initial).
Dfa addition_dfa();
/// Addition restricted to valid representations on every track, minimized.
Dfa canonical_addition_dfa();
/// Hand-built comparator on valid representations: first differing column.
Dfa less_than_dfa();
/// Trailing-ones counter: valid Tribonacci representations with leading zeros.
Dfa tribonacci_validity_dfa();

class ClosureError : public std::runtime_error {
 public:
  explicit ClosureError(const std::string& automaton)
      : std::runtime_error("automaton '" + automaton +
                           "' is not closed under leading zero columns"),
        automaton_(automaton) {}
  const std::string& automaton() const { return automaton_; }

 private:
  std::string automaton_;
};

/// Parses a .nsd definition. Throws FormatError on syntax problems and
/// ClosureError when an automaton is not padding-closed.
NumerationSystem load_numeration(std::string_view text);

/// w accepted iff 0w accepted, for every word w.
bool is_padding_closed(const Dfa& a);

}  // namespace tribo
