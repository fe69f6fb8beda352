#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tribo/bignum.hpp"
#include "tribo/dfa.hpp"
#include "tribo/numeration.hpp"

namespace tribo {

struct Limits {
  /// Largest automaton (subset states, product states) any step may build.
  std::size_t max_states = 5'000'000;
};

class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t states)
      : std::runtime_error(what), states_(states) {}
  std::size_t states() const { return states_; }

 private:
  std::size_t states_;
};

/// Binary Boolean function as a truth table: bit (2x + y) holds op(x, y).
struct BoolOp {
  std::uint8_t table;
  bool operator()(bool x, bool y) const { return (table >> (2 * int{x} + int{y})) & 1U; }
};
inline constexpr BoolOp kAnd{0b1000};
inline constexpr BoolOp kOr{0b1110};
inline constexpr BoolOp kImplies{0b1011};
inline constexpr BoolOp kIff{0b1001};
inline constexpr BoolOp kAndNot{0b0100};

/// The decision-procedure kernel for one numeration system. Every operation
/// returning a Dfa returns it minimized and in normalized form: closed under
/// leading all-zero columns and restricted to valid representations on every
/// track. Not thread-safe (it records the peak intermediate size); use one
/// instance per thread.
class Kernel {
 public:
  explicit Kernel(const NumerationSystem& ns, Limits limits = {});

  const NumerationSystem& numeration() const { return *ns_; }
  const Limits& limits() const { return limits_; }
  void set_limits(Limits limits) { limits_ = limits; }

  /// Largest intermediate automaton built since the last reset.
  std::size_t peak_states() const { return peak_; }
  void reset_peak() { peak_ = 0; }

  /// All valid tuples over the given tracks.
  Dfa universe(const std::vector<std::string>& tracks) const;
  Dfa empty(const std::vector<std::string>& tracks) const;

  /// Tracks are unified by name: a's order first, then b's new tracks.
  Dfa product(const Dfa& a, const Dfa& b, BoolOp op) const;
  Dfa intersect(const Dfa& a, const Dfa& b) const { return product(a, b, kAnd); }
  Dfa complement(const Dfa& a) const;

  /// Existential projection; initial states absorb leading columns that are
  /// zero on every remaining track, so witnesses longer than the free
  /// variables are found.
  Nfa project(const Dfa& a, std::string_view track) const;
  Dfa determinize(const Nfa& n) const;
  Dfa exists(const Dfa& a, std::string_view track) const;
  Dfa forall(const Dfa& a, std::string_view track) const;

  /// Renames tracks; tracks mapped to the same name are identified.
  Dfa rename(const Dfa& a, const std::map<std::string, std::string>& names) const;

  /// Smallest normalized language containing L(a).
  Dfa pad_closure(const Dfa& a) const;

  /// Relations over named tracks.
  Dfa addition(const std::string& x, const std::string& y, const std::string& z) const;
  Dfa less_than(const std::string& x, const std::string& y) const;
  Dfa equal(const std::string& x, const std::string& y) const;
  Dfa constant(const Natural& c, const std::string& x) const;

  /// Regular expression over digits: 0, 1, ε (or "e"), +, *, parentheses.
  /// Describes representations without leading zeros; the result is
  /// normalized. Throws FormatError (line 1) on syntax errors.
  Dfa regex(std::string_view pattern, const std::string& track = "n") const;

  /// Accepted tuples in radix order, padding duplicates skipped. Stops after
  /// `limit` tuples, once representations exceed `max_length` digits when
  /// given, or once the language is exhausted.
  std::vector<std::vector<Natural>> enumerate(const Dfa& a, std::size_t limit,
                                              std::size_t max_length = 0) const;

  bool accepts(const Dfa& a, std::span<const Natural> values) const;

 private:
  Dfa product_impl(const Dfa& a, const Dfa& b, BoolOp op, bool validate) const;
  void note(std::size_t states, const char* what) const;

  const NumerationSystem* ns_;
  Limits limits_;
  Dfa validity_;  // minimized one-track validity, tracks {"#v"}
  State valid_dead_ = kNoState;
  mutable std::size_t peak_ = 0;
};

}  // namespace tribo
