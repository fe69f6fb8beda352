#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tribo {

using State = std::uint32_t;
using Symbol = std::uint32_t;

inline constexpr State kNoState = ~State{0};

/// Columns of r bits are numbered by reading the column as a binary number
/// whose most significant bit is track 0, so [x,y,z] = 4x + 2y + z.
inline int symbol_bit(Symbol s, std::size_t track, std::size_t arity) {
  return static_cast<int>((s >> (arity - 1 - track)) & 1U);
}

inline Symbol make_symbol(std::span<const int> bits) {
  Symbol s = 0;
  for (int b : bits) s = (s << 1) | static_cast<Symbol>(b & 1);
  return s;
}

/// "[1,0,1]" for s = 5 at arity 3; "[]" at arity 0.
std::string symbol_text(Symbol s, std::size_t arity);

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Complete deterministic automaton over the alphabet of all 2^r bit columns,
/// reading numbers most significant digit first. Each track carries one
/// named variable.
class Dfa {
 public:
  /// Arity-0 automaton rejecting everything.
  Dfa();
  Dfa(std::vector<std::string> tracks, std::size_t num_states, State initial,
      std::vector<State> transitions, std::vector<std::uint8_t> accepting);

  /// One-state automaton accepting every word (value = true) or none.
  static Dfa constant(bool value, std::vector<std::string> tracks = {});

  std::size_t arity() const { return tracks_.size(); }
  std::size_t alphabet_size() const { return std::size_t{1} << tracks_.size(); }
  std::size_t num_states() const { return accepting_.size(); }
  State initial() const { return initial_; }
  State next(State q, Symbol a) const { return delta_[q * alphabet_size() + a]; }
  bool is_accepting(State q) const { return accepting_[q] != 0; }

  const std::vector<std::string>& tracks() const { return tracks_; }
  std::optional<std::size_t> track_index(std::string_view name) const;
  bool has_track(std::string_view name) const { return track_index(name).has_value(); }

  std::span<const State> transitions() const { return delta_; }
  std::span<const std::uint8_t> accepting() const { return accepting_; }

  bool accepts(std::span<const Symbol> word) const;
  State run(std::span<const Symbol> word) const;

  /// Truth value of an arity-0 automaton.
  bool truth() const;

  /// Same automaton with tracks renamed positionally.
  Dfa with_tracks(std::vector<std::string> names) const;

 private:
  std::vector<std::string> tracks_;
  State initial_ = 0;
  std::vector<State> delta_;
  std::vector<std::uint8_t> accepting_;
};

/// Nondeterministic automaton; only produced by projection.
class Nfa {
 public:
  Nfa(std::vector<std::string> tracks, std::size_t num_states, std::vector<State> initial,
      std::vector<std::uint32_t> offsets, std::vector<State> targets,
      std::vector<std::uint8_t> accepting);

  std::size_t arity() const { return tracks_.size(); }
  std::size_t alphabet_size() const { return std::size_t{1} << tracks_.size(); }
  std::size_t num_states() const { return accepting_.size(); }
  const std::vector<std::string>& tracks() const { return tracks_; }
  const std::vector<State>& initial() const { return initial_; }
  bool is_accepting(State q) const { return accepting_[q] != 0; }

  std::span<const State> successors(State q, Symbol a) const {
    const std::size_t k = q * alphabet_size() + a;
    return {targets_.data() + offsets_[k], targets_.data() + offsets_[k + 1]};
  }

  bool accepts(std::span<const Symbol> word) const;

 private:
  std::vector<std::string> tracks_;
  std::vector<State> initial_;
  std::vector<std::uint32_t> offsets_;
  std::vector<State> targets_;
  std::vector<std::uint8_t> accepting_;
};

/// Automaton with output over one track: a[n] = output(delta(q0, (n)_T)).
class Dfao {
 public:
  Dfao(std::size_t num_states, State initial, std::vector<State> transitions,
       std::vector<int> outputs);

  std::size_t num_states() const { return outputs_.size(); }
  State initial() const { return initial_; }
  State next(State q, int digit) const { return delta_[2 * q + static_cast<std::size_t>(digit)]; }
  int output(State q) const { return outputs_[q]; }
  const std::vector<int>& outputs() const { return outputs_; }

  int evaluate(std::span<const std::uint8_t> digits) const;

 private:
  State initial_;
  std::vector<State> delta_;
  std::vector<int> outputs_;
};

/// Minimal complete DFA for the same language, states numbered breadth-first
/// from the initial state in symbol order, so equal languages serialize
/// identically.
Dfa minimize(const Dfa& a);

/// Number of states excluding a non-accepting sink, if the automaton has one
/// that is not its initial state.
std::size_t live_states(const Dfa& a);

/// Output-respecting minimization with canonical numbering.
Dfao minimize(const Dfao& d);

bool is_empty(const Dfa& a);

/// Both automata must carry the same track names (any order).
bool language_equal(const Dfa& a, const Dfa& b);

/// Permutes tracks into the given order (same name set).
Dfa reorder(const Dfa& a, const std::vector<std::string>& order);

/// States from which an accepting state is reachable.
std::vector<std::uint8_t> coreachable(const Dfa& a);

// Text formats.
std::string serialize(const Dfa& a);
Dfa parse_automaton(std::string_view text);
std::string to_dot(const Dfa& a, std::string_view name = "automaton");
std::string to_dot(const Dfao& d, std::string_view name = "dfao");

}  // namespace tribo
