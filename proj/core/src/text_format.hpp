#pragma once

// Line-oriented reader shared by the automaton and .nsd parsers.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tribo/dfa.hpp"

namespace tribo::detail {

struct Line {
  std::size_t number = 0;  // 1-based
  std::string_view text;   // comment stripped, right-trimmed
};

class LineReader {
 public:
  explicit LineReader(std::string_view text);

  /// Next non-blank line, or nullopt at end.
  std::optional<Line> peek() const;
  std::optional<Line> next();
  std::size_t last_line() const { return last_; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::size_t last_ = 0;
};

/// Cursor over the words of a single line; columns are 1-based.
class Tokens {
 public:
  explicit Tokens(const Line& line) : line_(line) {}

  bool done();
  std::size_t column() const { return pos_ + 1; }
  std::string_view word();
  std::size_t number();
  /// A bracketed bit column "[b,b,...]".
  Symbol column_symbol(std::size_t arity);
  [[noreturn]] void fail(const std::string& what) const;
  [[noreturn]] void fail_at(const std::string& what, std::size_t column) const;

 private:
  void skip_space();
  const Line& line_;
  std::size_t pos_ = 0;
};

/// Reads "tracks/states/initial/accepting" headers followed by transition
/// lines until the input ends or a line starting with '[' appears. When
/// `arity` is given the "tracks" header is optional and defaults to `names`.
Dfa read_automaton(LineReader& reader, std::optional<std::size_t> arity,
                   std::vector<std::string> names);

}  // namespace tribo::detail
