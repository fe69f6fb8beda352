#include "text_format.hpp"

#include <cctype>

namespace tribo::detail {

LineReader::LineReader(std::string_view text) {
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
    std::size_t lead = 0;
    while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
    if (lead == raw.size()) continue;
    lines_.push_back({number, raw});
  }
  last_ = number;
}

std::optional<Line> LineReader::peek() const {
  if (pos_ >= lines_.size()) return std::nullopt;
  return lines_[pos_];
}

std::optional<Line> LineReader::next() {
  if (pos_ >= lines_.size()) return std::nullopt;
  return lines_[pos_++];
}

void Tokens::skip_space() {
  while (pos_ < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[pos_])))
    ++pos_;
}

bool Tokens::done() {
  skip_space();
  return pos_ >= line_.text.size();
}

std::string_view Tokens::word() {
  skip_space();
  const std::size_t start = pos_;
  while (pos_ < line_.text.size() && !std::isspace(static_cast<unsigned char>(line_.text[pos_])))
    ++pos_;
  if (start == pos_) fail("unexpected end of line");
  return line_.text.substr(start, pos_ - start);
}

std::size_t Tokens::number() {
  skip_space();
  const std::size_t start = pos_;
  std::size_t value = 0;
  const char* first = line_.text.data() + pos_;
  const char* last = line_.text.data() + line_.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || (ptr != last && !std::isspace(static_cast<unsigned char>(*ptr))))
    fail_at("expected a non-negative integer", start + 1);
  pos_ += static_cast<std::size_t>(ptr - first);
  return value;
}

Symbol Tokens::column_symbol(std::size_t arity) {
  skip_space();
  const std::size_t start = pos_;
  const auto& t = line_.text;
  if (pos_ >= t.size() || t[pos_] != '[') fail("expected '['");
  ++pos_;
  Symbol s = 0;
  std::size_t bits = 0;
  while (true) {
    if (pos_ < t.size() && t[pos_] == ']' && bits == 0) break;
    if (pos_ >= t.size() || (t[pos_] != '0' && t[pos_] != '1')) fail("expected bit 0 or 1");
    s = (s << 1) | static_cast<Symbol>(t[pos_] - '0');
    ++bits;
    ++pos_;
    if (pos_ < t.size() && t[pos_] == ',') {
      ++pos_;
      continue;
    }
    if (pos_ < t.size() && t[pos_] == ']') break;
    fail("expected ',' or ']'");
  }
  ++pos_;
  if (bits != arity)
    fail_at("column has " + std::to_string(bits) + " bits, expected " + std::to_string(arity),
            start + 1);
  return s;
}

void Tokens::fail(const std::string& what) const { fail_at(what, pos_ + 1); }

void Tokens::fail_at(const std::string& what, std::size_t column) const {
  throw FormatError(what, line_.number, column);
}

Dfa read_automaton(LineReader& reader, std::optional<std::size_t> arity,
                   std::vector<std::string> names) {
  std::optional<std::vector<std::string>> tracks;
  std::optional<std::size_t> states;
  std::optional<State> initial;
  std::optional<std::vector<State>> accepting;

  auto header_line = [&]() {
    auto line = reader.peek();
    if (!line || line->text.empty()) return false;
    const char c = line->text[line->text.find_first_not_of(" \t")];
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
  };

  while (header_line()) {
    const Line line = *reader.next();
    Tokens tok(line);
    const std::size_t col = tok.column();
    const std::string_view key = tok.word();
    if (key == "tracks") {
      std::vector<std::string> t;
      while (!tok.done()) t.emplace_back(tok.word());
      if (arity && t.size() != *arity) tok.fail_at("wrong number of tracks", col);
      tracks = std::move(t);
    } else if (key == "states") {
      states = tok.number();
      if (*states == 0) tok.fail("an automaton needs at least one state");
    } else if (key == "initial") {
      initial = static_cast<State>(tok.number());
    } else if (key == "accepting") {
      std::vector<State> acc;
      while (!tok.done()) acc.push_back(static_cast<State>(tok.number()));
      accepting = std::move(acc);
    } else {
      tok.fail_at("unknown keyword '" + std::string(key) + "'", col);
    }
    if (!tok.done()) tok.fail("trailing characters");
  }

  const std::size_t where = reader.peek() ? reader.peek()->number : reader.last_line();
  if (!tracks) {
    if (!arity) throw FormatError("missing 'tracks' header", where, 1);
    tracks = std::move(names);
  }
  if (!states) throw FormatError("missing 'states' header", where, 1);
  if (!initial) throw FormatError("missing 'initial' header", where, 1);
  if (!accepting) throw FormatError("missing 'accepting' header", where, 1);
  if (*initial >= *states) throw FormatError("initial state out of range", where, 1);

  const std::size_t r = tracks->size();
  const std::size_t k = std::size_t{1} << r;
  std::vector<State> delta(*states * k, kNoState);
  std::vector<std::uint8_t> acc(*states, 0);
  for (State q : *accepting) {
    if (q >= *states) throw FormatError("accepting state out of range", where, 1);
    acc[q] = 1;
  }

  while (auto line = reader.peek()) {
    if (line->text.find_first_not_of(" \t") != std::string_view::npos &&
        line->text[line->text.find_first_not_of(" \t")] == '[')
      break;
    reader.next();
    Tokens tok(*line);
    const std::size_t qcol = tok.column();
    const std::size_t q = tok.number();
    if (q >= *states) tok.fail_at("state out of range", qcol);
    const Symbol s = tok.column_symbol(r);
    const std::size_t tcol = tok.column();
    const std::size_t target = tok.number();
    if (target >= *states) tok.fail_at("state out of range", tcol);
    if (!tok.done()) tok.fail("trailing characters");
    if (delta[q * k + s] != kNoState) tok.fail_at("duplicate transition", qcol);
    delta[q * k + s] = static_cast<State>(target);
  }

  for (std::size_t i = 0; i < delta.size(); ++i)
    if (delta[i] == kNoState) {
      const std::size_t end = reader.peek() ? reader.peek()->number : reader.last_line();
      throw FormatError("missing transition from state " + std::to_string(i / k) + " on " +
                            symbol_text(static_cast<Symbol>(i % k), r),
                        end, 1);
    }
  return Dfa(std::move(*tracks), *states, *initial, std::move(delta), std::move(acc));
}

}  // namespace tribo::detail
