#include "tribo/numeration.hpp"

#include <cstdint>
#include <mutex>
#include <stdexcept>

#include "base2_nsd.hpp"
#include "text_format.hpp"
#include "tribo/automata.hpp"
#include "tribonacci_nsd.hpp"

namespace tribo {

namespace {

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Edits to the shipped table fail the build.
static_assert(fnv1a(kTribonacciNsd) == 0x4c473b7559ccb6e9ULL,
              "tribonacci.nsd differs from the verified table");

}  // namespace

Word parse_word(std::string_view bits) {
  Word w;
  w.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("not a bit string: " + std::string(bits));
    w.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

std::string word_text(std::span<const std::uint8_t> w) {
  std::string s;
  for (auto d : w) s += static_cast<char>('0' + d);
  return s;
}

NumerationSystem::NumerationSystem(std::string name, std::vector<Natural> recurrence,
                                   std::vector<Natural> initial, Dfa addition, Dfa less_than,
                                   Dfa validity)
    : name_(std::move(name)),
      recurrence_(std::move(recurrence)),
      initial_(std::move(initial)),
      addition_(std::move(addition)),
      less_than_(std::move(less_than)),
      validity_(std::move(validity)) {
  if (recurrence_.empty() || initial_.size() != recurrence_.size())
    throw std::invalid_argument("numeration: recurrence and initial values differ in length");
  if (addition_.arity() != 3 || less_than_.arity() != 2 || validity_.arity() != 1)
    throw std::invalid_argument("numeration: automata have the wrong arity");
  weights_ = initial_;
  while (weights_.size() < 128) {
    Natural w = 0;
    for (std::size_t i = 0; i < recurrence_.size(); ++i)
      w += recurrence_[i] * weights_[weights_.size() - 1 - i];
    weights_.push_back(w);
  }
  for (std::size_t i = 1; i < weights_.size(); ++i)
    if (weights_[i] <= weights_[i - 1])
      throw std::invalid_argument("numeration: place values must increase");
}

Natural NumerationSystem::place_value(std::size_t i) const {
  if (i < weights_.size()) return weights_[i];
  std::vector<Natural> w(weights_.end() - static_cast<std::ptrdiff_t>(recurrence_.size()),
                         weights_.end());
  for (std::size_t j = weights_.size(); j <= i; ++j) {
    Natural next = 0;
    for (std::size_t t = 0; t < recurrence_.size(); ++t) next += recurrence_[t] * w[w.size() - 1 - t];
    w.erase(w.begin());
    w.push_back(next);
  }
  return w.back();
}

Natural NumerationSystem::value_of(std::span<const std::uint8_t> w) const {
  Natural v = 0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i)
    if (w[i]) v += place_value(n - 1 - i);
  return v;
}

Word NumerationSystem::canonical_rep(const Natural& n) const {
  if (n == 0) return {};
  std::size_t top = 0;
  while (place_value(top + 1) <= n) ++top;
  Word w(top + 1, 0);
  Natural rest = n;
  for (std::size_t i = top + 1; i-- > 0;) {
    const Natural pv = place_value(i);
    if (pv <= rest) {
      rest -= pv;
      w[top - i] = 1;
    }
  }
  if (rest != 0) throw std::logic_error("canonical_rep: greedy expansion left a remainder");
  return w;
}

bool NumerationSystem::is_canonical(std::span<const std::uint8_t> w) const {
  if (!w.empty() && w[0] == 0) return false;
  State q = validity_.initial();
  for (auto d : w) q = validity_.next(q, d);
  return validity_.is_accepting(q);
}

std::vector<Symbol> NumerationSystem::zip(std::span<const Natural> values) const {
  std::vector<Word> reps;
  std::size_t len = 0;
  for (const auto& v : values) {
    reps.push_back(canonical_rep(v));
    len = std::max(len, reps.back().size());
  }
  std::vector<Symbol> out(len, 0);
  for (std::size_t t = 0; t < reps.size(); ++t) {
    const std::size_t pad = len - reps[t].size();
    for (std::size_t i = 0; i < len; ++i) {
      const int bit = i < pad ? 0 : reps[t][i - pad];
      out[i] = (out[i] << 1) | static_cast<Symbol>(bit);
    }
  }
  return out;
}

std::vector<Natural> NumerationSystem::unzip(std::span<const Symbol> columns,
                                             std::size_t arity) const {
  std::vector<Natural> out(arity, Natural(0));
  const std::size_t n = columns.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < arity; ++t)
      if (symbol_bit(columns[i], t, arity)) out[t] += place_value(n - 1 - i);
  return out;
}

void for_each_representation(const NumerationSystem& ns, std::size_t count,
                             const std::function<void(const Word&)>& visit) {
  if (count == 0) return;
  const Dfa& v = ns.validity();
  const auto live = coreachable(v);
  Word w;
  visit(w);
  std::size_t emitted = 1;
  // Depth-first in lexicographic order over valid words of one length.
  std::function<void(State, std::size_t)> walk = [&](State q, std::size_t remaining) {
    if (emitted >= count) return;
    if (remaining == 0) {
      if (v.is_accepting(q)) {
        visit(w);
        ++emitted;
      }
      return;
    }
    for (std::uint8_t d = w.empty() ? 1 : 0; d < 2 && emitted < count; ++d) {
      const State t = v.next(q, d);
      if (!live[t]) continue;
      w.push_back(d);
      walk(t, remaining - 1);
      w.pop_back();
    }
  };
  for (std::size_t len = 1; emitted < count; ++len) {
    if (len > 4096) throw std::logic_error("for_each_representation: validity language too sparse");
    walk(v.initial(), len);
  }
}

Natural tribonacci(unsigned n) {
  Natural a = 0, b = 1, c = 1;
  if (n == 0) return a;
  for (unsigned i = 1; i < n; ++i) {
    Natural d = a + b + c;
    a = std::move(b);
    b = std::move(c);
    c = std::move(d);
  }
  return b;
}

bool is_padding_closed(const Dfa& a) {
  const Dfa m = minimize(a);
  return m.next(m.initial(), 0) == m.initial();
}

NumerationSystem load_numeration(std::string_view text) {
  detail::LineReader reader(text);
  std::optional<std::string> name;
  std::optional<std::vector<Natural>> recurrence, initial;
  std::optional<Dfa> addition, less_than, validity;

  auto naturals = [](detail::Tokens& tok) {
    std::vector<Natural> out;
    while (!tok.done()) {
      const std::size_t col = tok.column();
      const std::string word(tok.word());
      if (word.find_first_not_of("0123456789") != std::string::npos)
        tok.fail_at("expected a non-negative integer", col);
      out.emplace_back(word);
    }
    return out;
  };

  while (auto line = reader.next()) {
    detail::Tokens tok(*line);
    const std::size_t col = tok.column();
    const std::string_view head = tok.word();
    if (head.size() < 2 || head.front() != '[' || head.back() != ']')
      tok.fail_at("expected a section header", col);
    if (!tok.done()) tok.fail("trailing characters after section header");
    const std::string_view section = head.substr(1, head.size() - 2);
    if (section == "name") {
      auto body = reader.next();
      if (!body) throw FormatError("missing name", reader.last_line(), 1);
      detail::Tokens t(*body);
      name = std::string(t.word());
    } else if (section == "weights") {
      for (int i = 0; i < 2; ++i) {
        auto body = reader.next();
        if (!body) throw FormatError("incomplete [weights] section", reader.last_line(), 1);
        detail::Tokens t(*body);
        const std::size_t c = t.column();
        const std::string_view key = t.word();
        if (key == "recurrence") recurrence = naturals(t);
        else if (key == "initial") initial = naturals(t);
        else t.fail_at("unknown keyword '" + std::string(key) + "'", c);
      }
    } else if (section == "addition") {
      addition = detail::read_automaton(reader, 3, {"x", "y", "z"});
    } else if (section == "less_than") {
      less_than = detail::read_automaton(reader, 2, {"x", "y"});
    } else if (section == "validity") {
      validity = detail::read_automaton(reader, 1, {"n"});
    } else {
      tok.fail_at("unknown section '" + std::string(section) + "'", col);
    }
  }
  const std::size_t end = reader.last_line();
  if (!name) throw FormatError("missing [name] section", end, 1);
  if (!recurrence || !initial) throw FormatError("missing [weights] section", end, 1);
  if (!addition) throw FormatError("missing [addition] section", end, 1);
  if (!less_than) throw FormatError("missing [less_than] section", end, 1);
  if (!validity) throw FormatError("missing [validity] section", end, 1);
  if (!is_padding_closed(*addition)) throw ClosureError("addition");
  if (!is_padding_closed(*less_than)) throw ClosureError("less_than");
  if (!is_padding_closed(*validity)) throw ClosureError("validity");
  return NumerationSystem(std::move(*name), std::move(*recurrence), std::move(*initial),
                          std::move(*addition), std::move(*less_than), std::move(*validity));
}

std::string_view tribonacci_nsd_text() { return kTribonacciNsd; }
std::string_view base2_nsd_text() { return kBase2Nsd; }

const NumerationSystem& tribonacci_system() {
  static const NumerationSystem system = load_numeration(kTribonacciNsd);
  return system;
}

Natural value_of(std::span<const std::uint8_t> w) { return tribonacci_system().value_of(w); }
Word canonical_rep(const Natural& n) { return tribonacci_system().canonical_rep(n); }
bool is_canonical(std::span<const std::uint8_t> w) { return tribonacci_system().is_canonical(w); }
std::vector<Symbol> zip(std::span<const Natural> values) { return tribonacci_system().zip(values); }

Dfa addition_dfa() { return tribonacci_system().addition(); }

Dfa canonical_addition_dfa() {
  const Kernel kernel(tribonacci_system());
  return kernel.addition("x", "y", "z");
}

Dfa less_than_dfa() {
  // 0: equal so far, 1: x < y decided, 2: x > y decided.
  std::vector<State> delta = {0, 1, 2, 0, 1, 1, 1, 1, 2, 2, 2, 2};
  return Dfa({"x", "y"}, 3, 0, std::move(delta), {0, 1, 0});
}

Dfa tribonacci_validity_dfa() {
  // State = number of trailing ones; 3 is the sink for a factor 111.
  std::vector<State> delta = {0, 1, 0, 2, 0, 3, 3, 3};
  return Dfa({"n"}, 4, 0, std::move(delta), {1, 1, 1, 0});
}

}  // namespace tribo
