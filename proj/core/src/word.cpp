#include "tribo/word.hpp"

#include <algorithm>
#include <list>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace tribo {

Morphism tribonacci_morphism() { return Morphism{{{0, 1}, {0, 2}, {0}}, {}, 0}; }

Morphism parse_morphism(std::string_view spec) {
  Morphism m;
  std::string text(spec);
  for (char& c : text)
    if (c == ';') c = '\n';
  std::istringstream parts(text);
  std::string part;
  bool first = true;
  auto letters = [&](const std::string& s) {
    Letters out;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("morphism: bad letter '" + std::string(1, c) + "'");
      out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
  };
  while (std::getline(parts, part)) {
    std::erase(part, ' ');
    if (part.empty()) continue;
    if (first) {
      first = false;
      std::istringstream rules(part);
      std::string rule;
      while (std::getline(rules, rule, ',')) {
        const auto arrow = rule.find("->");
        if (arrow == std::string::npos || arrow != 1)
          throw std::invalid_argument("morphism: expected rules like 0->01, got '" + rule + "'");
        const std::size_t a = static_cast<std::size_t>(rule[0] - '0');
        if (m.images.size() <= a) m.images.resize(a + 1);
        m.images[a] = letters(rule.substr(3));
      }
    } else if (part.rfind("start=", 0) == 0) {
      m.start = std::stoi(part.substr(6));
    } else if (part.rfind("coding=", 0) == 0) {
      std::istringstream codes(part.substr(7));
      std::string c;
      while (std::getline(codes, c, ',')) m.coding.push_back(std::stoi(c));
    } else {
      throw std::invalid_argument("morphism: unknown option '" + part + "'");
    }
  }
  if (m.images.empty()) throw std::invalid_argument("morphism: no rules");
  for (const auto& img : m.images)
    for (auto c : img)
      if (c >= m.images.size()) throw std::invalid_argument("morphism: image uses an undefined letter");
  if (!m.coding.empty() && m.coding.size() != m.images.size())
    throw std::invalid_argument("morphism: coding must cover every letter");
  return m;
}

Letters morphic_prefix(const Morphism& m, std::size_t length) {
  if (length == 0) return {};
  const auto s = static_cast<std::size_t>(m.start);
  if (s >= m.images.size() || m.images[s].empty() || m.images[s][0] != m.start)
    throw std::invalid_argument("morphism is not prolongable on its start letter");
  Letters w = m.images[s];
  if (w.size() == 1) {
    w.assign(length, static_cast<std::uint8_t>(m.start));
  } else {
    for (std::size_t i = 1; w.size() < length; ++i) {
      const auto& img = m.images[w[i]];
      w.insert(w.end(), img.begin(), img.end());
    }
  }
  w.resize(length);
  if (!m.coding.empty())
    for (auto& c : w) c = static_cast<std::uint8_t>(m.coding[c]);
  return w;
}

const Letters& tribonacci_prefix(std::size_t length) {
  // Grown prefixes are appended, never replaced, so references stay valid.
  static std::mutex lock;
  static std::list<Letters> cache;
  std::lock_guard guard(lock);
  if (cache.empty() || cache.back().size() < length) {
    const std::size_t have = cache.empty() ? 0 : cache.back().size();
    cache.push_back(morphic_prefix(tribonacci_morphism(), std::max({length, 2 * have, std::size_t{1} << 20})));
  }
  return cache.back();
}

std::string finite_word(unsigned n) {
  std::string y[4] = {"", "2", "0", "01"};
  if (n < 4) return y[n];
  for (unsigned i = 4; i <= n; ++i) {
    std::string next = y[3] + y[2] + y[1];
    y[0] = std::move(y[1]);
    y[1] = std::move(y[2]);
    y[2] = std::move(y[3]);
    y[3] = std::move(next);
  }
  return y[3];
}

std::string letters_text(const Letters& w) {
  std::string s;
  for (auto c : w) s += static_cast<char>('0' + c);
  return s;
}

namespace {

constexpr int kDontCare = -1;

bool compatible(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != kDontCare && b[i] != kDontCare && a[i] != b[i]) return false;
  return true;
}

std::optional<Dfao> try_learn(const NumerationSystem& ns, const Letters& prefix, std::size_t depth,
                              std::size_t verify_below) {
  // Suffixes of length <= depth, shortest first.
  std::vector<Word> suffixes{{}};
  for (std::size_t i = 0; i < suffixes.size(); ++i)
    if (suffixes[i].size() < depth)
      for (std::uint8_t b = 0; b < 2; ++b) {
        Word s = suffixes[i];
        s.push_back(b);
        suffixes.push_back(std::move(s));
      }
  const Dfa& valid = ns.validity();
  auto signature = [&](const Word& access) {
    std::vector<int> sig;
    sig.reserve(suffixes.size());
    for (const auto& s : suffixes) {
      Word w = access;
      w.insert(w.end(), s.begin(), s.end());
      State q = valid.initial();
      for (auto d : w) q = valid.next(q, d);
      int out = kDontCare;
      if (valid.is_accepting(q)) {
        const Natural v = ns.value_of(w);
        if (v < prefix.size()) out = prefix[v.get_ui()];
      }
      sig.push_back(out);
    }
    return sig;
  };

  std::vector<Word> access{{}};
  std::vector<std::vector<int>> sigs{signature({})};
  std::vector<State> delta;
  for (std::size_t q = 0; q < access.size(); ++q) {
    if (access.size() > 256) return std::nullopt;
    for (std::uint8_t b = 0; b < 2; ++b) {
      Word w = access[q];
      w.push_back(b);
      const auto sig = signature(w);
      State target = kNoState;
      if (compatible(sigs[q], sig)) target = static_cast<State>(q);
      for (std::size_t p = 0; p < access.size() && target == kNoState; ++p)
        if (compatible(sigs[p], sig)) target = static_cast<State>(p);
      if (target == kNoState) {
        target = static_cast<State>(access.size());
        access.push_back(w);
        sigs.push_back(sig);
      }
      delta.push_back(target);
    }
  }
  std::vector<int> outputs;
  for (const auto& sig : sigs) outputs.push_back(sig[0] == kDontCare ? 0 : sig[0]);
  Dfao d = minimize(Dfao(access.size(), 0, std::move(delta), std::move(outputs)));

  bool ok = true;
  std::size_t n = 0;
  for_each_representation(ns, verify_below, [&](const Word& w) {
    if (ok && d.evaluate(w) != prefix[n]) ok = false;
    ++n;
  });
  if (!ok) return std::nullopt;
  return d;
}

}  // namespace

Dfao learn_dfao(const NumerationSystem& ns, const Letters& prefix, std::size_t verify_below) {
  if (verify_below > prefix.size()) throw std::invalid_argument("learn_dfao: prefix too short to verify");
  for (std::size_t depth = 2; depth <= 10; ++depth)
    if (auto d = try_learn(ns, prefix, depth, verify_below)) return *d;
  throw std::runtime_error("learn_dfao: no consistent automaton found; the word may not be automatic");
}

const Dfao& tribonacci_dfao() {
  static const Dfao d = learn_dfao(tribonacci_system(), tribonacci_prefix(1'000'000), 1'000'000);
  return d;
}

Dfao dfao_map(const Dfao& d, const std::function<int(int)>& f) {
  std::vector<State> delta;
  std::vector<int> outputs;
  for (State q = 0; q < d.num_states(); ++q) {
    delta.push_back(d.next(q, 0));
    delta.push_back(d.next(q, 1));
    outputs.push_back(f(d.output(q)));
  }
  return minimize(Dfao(d.num_states(), d.initial(), std::move(delta), std::move(outputs)));
}

int word_at(const Dfao& d, const Natural& n, const NumerationSystem& ns) {
  return d.evaluate(ns.canonical_rep(n));
}

}  // namespace tribo
