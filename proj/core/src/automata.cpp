#include "tribo/automata.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace tribo {

namespace {

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb3f99fc0101fULL;
  h ^= h >> 33;
  return h;
}

// Open-addressing index from keys (stored by the caller) to dense ids.
class IdTable {
 public:
  IdTable() : slots_(1024, kNoState), mask_(1023) {}

  template <typename Eq>
  std::pair<State, bool> find_or_insert(std::uint64_t hash, Eq&& equal_to, State fresh) {
    if (4 * (hashes_.size() + 1) > 3 * slots_.size()) grow();
    std::size_t i = hash & mask_;
    while (slots_[i] != kNoState) {
      const State id = slots_[i];
      if (hashes_[id] == hash && equal_to(id)) return {id, false};
      i = (i + 1) & mask_;
    }
    slots_[i] = fresh;
    hashes_.push_back(hash);
    return {fresh, true};
  }

 private:
  void grow() {
    std::vector<State> bigger(slots_.size() * 2, kNoState);
    const std::size_t mask = bigger.size() - 1;
    for (State id = 0; id < hashes_.size(); ++id) {
      std::size_t i = hashes_[id] & mask;
      while (bigger[i] != kNoState) i = (i + 1) & mask;
      bigger[i] = id;
    }
    slots_ = std::move(bigger);
    mask_ = mask;
  }

  std::vector<State> slots_;
  std::size_t mask_;
  std::vector<std::uint64_t> hashes_;
};

// Symbol over `to` tracks -> symbol over the subset `from` of those tracks.
std::vector<Symbol> restriction(const std::vector<std::string>& to,
                                const std::vector<std::string>& from) {
  const std::size_t r = to.size();
  std::vector<std::size_t> where(from.size());
  for (std::size_t i = 0; i < from.size(); ++i)
    where[i] = static_cast<std::size_t>(std::find(to.begin(), to.end(), from[i]) - to.begin());
  std::vector<Symbol> out(std::size_t{1} << r);
  for (Symbol s = 0; s < out.size(); ++s) {
    Symbol t = 0;
    for (std::size_t i = 0; i < from.size(); ++i)
      t = (t << 1) | static_cast<Symbol>(symbol_bit(s, where[i], r));
    out[s] = t;
  }
  return out;
}

// Whether every word leads to rejection from each state.
std::vector<std::uint8_t> dead_states(const Dfa& a) {
  auto co = coreachable(a);
  for (auto& c : co) c = !c;
  return co;
}

}  // namespace

Kernel::Kernel(const NumerationSystem& ns, Limits limits)
    : ns_(&ns), limits_(limits), validity_(minimize(ns.validity().with_tracks({"#v"}))) {
  const auto dead = dead_states(validity_);
  for (State q = 0; q < validity_.num_states(); ++q)
    if (dead[q]) valid_dead_ = q;
}

void Kernel::note(std::size_t states, const char* what) const {
  peak_ = std::max(peak_, states);
  if (states > limits_.max_states)
    throw ResourceError(std::string(what) + " exceeded the state budget of " +
                            std::to_string(limits_.max_states),
                        states);
}

Dfa Kernel::empty(const std::vector<std::string>& tracks) const {
  return Dfa::constant(false, tracks);
}

Dfa Kernel::universe(const std::vector<std::string>& tracks) const {
  return complement(empty(tracks));
}

Dfa Kernel::product(const Dfa& a, const Dfa& b, BoolOp op) const {
  return product_impl(a, b, op, op.table != kAnd.table);
}

Dfa Kernel::complement(const Dfa& a) const {
  return product_impl(a, Dfa::constant(true, a.tracks()), BoolOp{0b0011}, true);
}

Dfa Kernel::product_impl(const Dfa& a, const Dfa& b, BoolOp op, bool validate) const {
  std::vector<std::string> tracks = a.tracks();
  for (const auto& t : b.tracks())
    if (!a.has_track(t)) tracks.push_back(t);
  const std::size_t r = tracks.size();
  const std::size_t k = std::size_t{1} << r;
  const auto to_a = restriction(tracks, a.tracks());
  const auto to_b = restriction(tracks, b.tracks());
  const auto dead_a = dead_states(a);
  const auto dead_b = dead_states(b);
  const bool a_dead_kills = !op(false, false) && !op(false, true);
  const bool b_dead_kills = !op(false, false) && !op(true, false);
  const bool both_dead_kills = !op(false, false);

  // Validity of every track runs alongside, packed base V.
  const std::size_t V = validity_.num_states();
  std::vector<std::uint32_t> pow(r + 1, 1);
  for (std::size_t t = 0; t < r; ++t) pow[t + 1] = pow[t] * static_cast<std::uint32_t>(V);
  if (validate && pow[r] > (1U << 30)) throw std::invalid_argument("product: too many tracks");
  const std::uint32_t valid_start = [&] {
    std::uint32_t c = 0;
    if (validate)
      for (std::size_t t = 0; t < r; ++t) c += validity_.initial() * pow[t];
    return c;
  }();

  using Key = std::array<State, 3>;
  std::vector<Key> keys;
  IdTable table;
  auto intern = [&](const Key& key) {
    const std::uint64_t h =
        mix((std::uint64_t{key[0]} << 32 | key[1]) ^ mix(std::uint64_t{key[2]} + 0x9e37));
    auto [id, fresh] = table.find_or_insert(
        h, [&](State i) { return keys[i] == key; }, static_cast<State>(keys.size()));
    if (fresh) {
      keys.push_back(key);
      if (keys.size() % 65536 == 0) note(keys.size(), "product");
    }
    return id;
  };
  const Key dead_key{kNoState, kNoState, kNoState};
  auto normalize = [&](State p, State q, std::uint32_t code) -> Key {
    if ((dead_a[p] && a_dead_kills) || (dead_b[q] && b_dead_kills) ||
        (dead_a[p] && dead_b[q] && both_dead_kills))
      return dead_key;
    if (validate && valid_dead_ != kNoState) {
      std::uint32_t c = code;
      for (std::size_t t = 0; t < r; ++t, c /= static_cast<std::uint32_t>(V))
        if (c % V == valid_dead_) return dead_key;
    }
    return {p, q, code};
  };

  std::vector<State> delta;
  std::vector<std::uint8_t> acc;
  intern(normalize(a.initial(), b.initial(), valid_start));
  for (State id = 0; id < keys.size(); ++id) {
    const Key key = keys[id];
    if (key == dead_key) {
      acc.push_back(0);
      delta.insert(delta.end(), k, id);
      continue;
    }
    const auto [p, q, code] = key;
    acc.push_back(op(a.is_accepting(p), b.is_accepting(q)) ? 1 : 0);
    for (Symbol s = 0; s < k; ++s) {
      std::uint32_t next_code = 0;
      if (validate) {
        std::uint32_t c = code;
        for (std::size_t t = 0; t < r; ++t, c /= static_cast<std::uint32_t>(V)) {
          const State v = validity_.next(c % V, static_cast<Symbol>(symbol_bit(s, t, r)));
          next_code += v * pow[t];
        }
      }
      delta.push_back(intern(normalize(a.next(p, to_a[s]), b.next(q, to_b[s]), next_code)));
    }
  }
  note(keys.size(), "product");
  return minimize(Dfa(std::move(tracks), keys.size(), 0, std::move(delta), std::move(acc)));
}

Nfa Kernel::project(const Dfa& a, std::string_view track) const {
  const auto idx = a.track_index(track);
  if (!idx) throw std::invalid_argument("project: no track '" + std::string(track) + "'");
  const std::size_t r = a.arity();
  const std::size_t low_bits = r - 1 - *idx;
  std::vector<std::string> tracks = a.tracks();
  tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(*idx));
  const std::size_t k = std::size_t{1} << (r - 1);
  auto widen = [&](Symbol s, Symbol bit) {
    const Symbol low = s & ((Symbol{1} << low_bits) - 1);
    const Symbol high = s >> low_bits;
    return (high << (low_bits + 1)) | (bit << low_bits) | low;
  };

  const auto co = coreachable(a);
  const std::size_t n = a.num_states();
  std::vector<std::uint32_t> offsets(n * k + 1, 0);
  std::vector<State> targets;
  targets.reserve(n * k * 2);
  for (State q = 0; q < n; ++q)
    for (Symbol s = 0; s < k; ++s) {
      offsets[q * k + s] = static_cast<std::uint32_t>(targets.size());
      if (!co[q]) continue;
      const State t0 = a.next(q, widen(s, 0));
      const State t1 = a.next(q, widen(s, 1));
      if (co[t0]) targets.push_back(t0);
      if (co[t1] && t1 != t0) targets.push_back(t1);
    }
  offsets[n * k] = static_cast<std::uint32_t>(targets.size());

  // States reachable through columns that are zero on every remaining track.
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<State> zero_reach{a.initial()};
  seen[a.initial()] = 1;
  for (std::size_t h = 0; h < zero_reach.size(); ++h)
    for (Symbol bit = 0; bit < 2; ++bit) {
      const State t = a.next(zero_reach[h], widen(0, bit));
      if (!seen[t]) {
        seen[t] = 1;
        zero_reach.push_back(t);
      }
    }
  std::vector<State> initial;
  for (State q : zero_reach)
    if (co[q]) initial.push_back(q);
  std::sort(initial.begin(), initial.end());
  note(n, "projection");
  return Nfa(std::move(tracks), n, std::move(initial), std::move(offsets), std::move(targets),
             std::vector<std::uint8_t>(a.accepting().begin(), a.accepting().end()));
}

Dfa Kernel::determinize(const Nfa& nfa) const {
  const std::size_t k = nfa.alphabet_size();
  std::vector<State> pool;
  std::vector<std::uint64_t> start{0};
  IdTable table;
  auto intern = [&](const std::vector<State>& subset) {
    std::uint64_t h = 0x243f6a8885a308d3ULL ^ subset.size();
    for (State q : subset) h = mix(h ^ q) + 0x9e3779b97f4a7c15ULL;
    const State fresh = static_cast<State>(start.size() - 1);
    auto [id, inserted] = table.find_or_insert(
        h,
        [&](State i) {
          const auto b = start[i], e = start[i + 1];
          return e - b == subset.size() && std::equal(subset.begin(), subset.end(), pool.begin() + static_cast<std::ptrdiff_t>(b));
        },
        fresh);
    if (inserted) {
      pool.insert(pool.end(), subset.begin(), subset.end());
      start.push_back(pool.size());
      if (fresh % 65536 == 0 && fresh) note(fresh, "subset construction");
    }
    return id;
  };

  std::vector<State> buffer(nfa.initial());
  intern(buffer);
  std::vector<State> delta;
  std::vector<std::uint8_t> acc;
  std::vector<std::uint32_t> stamp(nfa.num_states(), 0);
  std::uint32_t clock = 0;
  for (State id = 0; id + 1 < start.size(); ++id) {
    bool accepting = false;
    for (auto i = start[id]; i < start[id + 1]; ++i) accepting = accepting || nfa.is_accepting(pool[i]);
    acc.push_back(accepting ? 1 : 0);
    for (Symbol s = 0; s < k; ++s) {
      ++clock;
      buffer.clear();
      for (auto i = start[id]; i < start[id + 1]; ++i)
        for (State t : nfa.successors(pool[i], s))
          if (stamp[t] != clock) {
            stamp[t] = clock;
            buffer.push_back(t);
          }
      std::sort(buffer.begin(), buffer.end());
      delta.push_back(intern(buffer));
    }
  }
  const std::size_t n = start.size() - 1;
  note(n, "subset construction");
  return minimize(Dfa(nfa.tracks(), n, 0, std::move(delta), std::move(acc)));
}

Dfa Kernel::exists(const Dfa& a, std::string_view track) const {
  return determinize(project(a, track));
}

Dfa Kernel::forall(const Dfa& a, std::string_view track) const {
  return complement(exists(complement(a), track));
}

Dfa Kernel::rename(const Dfa& a, const std::map<std::string, std::string>& names) const {
  std::vector<std::string> renamed;
  for (const auto& t : a.tracks()) {
    auto it = names.find(t);
    renamed.push_back(it == names.end() ? t : it->second);
  }
  std::vector<std::string> tracks;
  for (const auto& t : renamed)
    if (std::find(tracks.begin(), tracks.end(), t) == tracks.end()) tracks.push_back(t);
  if (tracks.size() == renamed.size() && tracks == renamed)
    return a.with_tracks(std::move(tracks));

  const std::size_t r = a.arity();
  const std::size_t r2 = tracks.size();
  const std::size_t k2 = std::size_t{1} << r2;
  std::vector<std::size_t> where(r);
  for (std::size_t i = 0; i < r; ++i)
    where[i] = static_cast<std::size_t>(std::find(tracks.begin(), tracks.end(), renamed[i]) -
                                        tracks.begin());
  std::vector<Symbol> old_symbol(k2);
  for (Symbol s = 0; s < k2; ++s) {
    Symbol o = 0;
    for (std::size_t i = 0; i < r; ++i) o = (o << 1) | static_cast<Symbol>(symbol_bit(s, where[i], r2));
    old_symbol[s] = o;
  }
  std::vector<State> delta(a.num_states() * k2);
  for (State q = 0; q < a.num_states(); ++q)
    for (Symbol s = 0; s < k2; ++s) delta[q * k2 + s] = a.next(q, old_symbol[s]);
  return minimize(Dfa(std::move(tracks), a.num_states(), a.initial(), std::move(delta),
                      std::vector<std::uint8_t>(a.accepting().begin(), a.accepting().end())));
}

Dfa Kernel::pad_closure(const Dfa& a) const {
  const std::size_t n = a.num_states();
  const std::size_t k = a.alphabet_size();
  const State fresh = static_cast<State>(n);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<State> zero_reach{a.initial()};
  seen[a.initial()] = 1;
  for (std::size_t h = 0; h < zero_reach.size(); ++h) {
    const State t = a.next(zero_reach[h], 0);
    if (!seen[t]) {
      seen[t] = 1;
      zero_reach.push_back(t);
    }
  }
  std::sort(zero_reach.begin(), zero_reach.end());

  std::vector<std::uint32_t> offsets((n + 1) * k + 1, 0);
  std::vector<State> targets;
  for (State q = 0; q < n; ++q)
    for (Symbol s = 0; s < k; ++s) {
      offsets[q * k + s] = static_cast<std::uint32_t>(targets.size());
      targets.push_back(a.next(q, s));
    }
  for (Symbol s = 0; s < k; ++s) {
    offsets[fresh * k + s] = static_cast<std::uint32_t>(targets.size());
    if (s == 0) {
      targets.insert(targets.end(), zero_reach.begin(), zero_reach.end());
      targets.push_back(fresh);
    }
  }
  offsets[(n + 1) * k] = static_cast<std::uint32_t>(targets.size());
  std::vector<State> initial = zero_reach;
  initial.push_back(fresh);
  std::vector<std::uint8_t> acc(a.accepting().begin(), a.accepting().end());
  acc.push_back(a.is_accepting(a.initial()) ? 1 : 0);
  const Nfa nfa(a.tracks(), n + 1, std::move(initial), std::move(offsets), std::move(targets),
                std::move(acc));
  return intersect(determinize(nfa), universe(a.tracks()));
}

Dfa Kernel::addition(const std::string& x, const std::string& y, const std::string& z) const {
  const Dfa raw = ns_->addition().with_tracks({"#ax", "#ay", "#az"});
  const Dfa canon = intersect(raw, universe(raw.tracks()));
  return rename(canon, {{"#ax", x}, {"#ay", y}, {"#az", z}});
}

Dfa Kernel::less_than(const std::string& x, const std::string& y) const {
  const Dfa raw = ns_->less_than().with_tracks({"#lx", "#ly"});
  const Dfa canon = intersect(raw, universe(raw.tracks()));
  return rename(canon, {{"#lx", x}, {"#ly", y}});
}

Dfa Kernel::equal(const std::string& x, const std::string& y) const {
  const std::size_t n = validity_.num_states();
  const State sink = static_cast<State>(n);
  std::vector<State> delta((n + 1) * 4, sink);
  std::vector<std::uint8_t> acc(n + 1, 0);
  for (State q = 0; q < n; ++q) {
    acc[q] = validity_.is_accepting(q);
    delta[q * 4 + 0] = validity_.next(q, 0);
    delta[q * 4 + 3] = validity_.next(q, 1);
  }
  const Dfa diag(std::vector<std::string>{"#ex", "#ey"}, n + 1, validity_.initial(),
                 std::move(delta), std::move(acc));
  return rename(minimize(diag), {{"#ex", x}, {"#ey", y}});
}

Dfa Kernel::constant(const Natural& c, const std::string& x) const {
  const Word rep = ns_->canonical_rep(c);
  const std::size_t len = rep.size();
  const State sink = static_cast<State>(len + 1);
  std::vector<State> delta((len + 2) * 2, sink);
  std::vector<std::uint8_t> acc;
  for (std::size_t i = 0; i < len + 2; ++i) acc.push_back(i == len ? 1 : 0);
  if (len == 0) delta[0] = 0;
  for (std::size_t i = 0; i < len; ++i) {
    if (i == 0) delta[0] = 0;  // leading zeros before the first digit
    delta[i * 2 + rep[i]] = static_cast<State>(i + 1);
  }
  return intersect(minimize(Dfa({x}, len + 2, 0, std::move(delta), std::move(acc))),
                   universe({x}));
}

// --- regular expressions ----------------------------------------------------

namespace {

struct Thompson {
  struct Node {
    std::vector<int> eps;
    int on[2] = {-1, -1};
  };
  std::vector<Node> nodes;
  std::string_view text;
  std::size_t pos = 0;

  int add() {
    nodes.emplace_back();
    return static_cast<int>(nodes.size() - 1);
  }
  [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, 1, pos + 1); }

  void skip() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }
  bool at(std::string_view token) {
    skip();
    return text.substr(pos, token.size()) == token;
  }

  std::pair<int, int> alternation() {
    auto frag = concatenation();
    while (at("+")) {
      ++pos;
      auto rhs = concatenation();
      const int s = add(), e = add();
      nodes[s].eps = {frag.first, rhs.first};
      nodes[frag.second].eps.push_back(e);
      nodes[rhs.second].eps.push_back(e);
      frag = {s, e};
    }
    return frag;
  }

  std::pair<int, int> concatenation() {
    std::optional<std::pair<int, int>> frag;
    while (true) {
      skip();
      if (pos >= text.size() || text[pos] == '+' || text[pos] == ')') break;
      auto next = starred();
      if (!frag) {
        frag = next;
      } else {
        nodes[frag->second].eps.push_back(next.first);
        frag->second = next.second;
      }
    }
    if (!frag) fail("expected an expression");
    return *frag;
  }

  std::pair<int, int> starred() {
    auto frag = atom();
    while (at("*")) {
      ++pos;
      const int s = add(), e = add();
      nodes[s].eps = {frag.first, e};
      nodes[frag.second].eps.push_back(frag.first);
      nodes[frag.second].eps.push_back(e);
      frag = {s, e};
    }
    return frag;
  }

  std::pair<int, int> atom() {
    skip();
    if (pos >= text.size()) fail("unexpected end of pattern");
    if (text[pos] == '(') {
      ++pos;
      auto frag = alternation();
      if (!at(")")) fail("expected ')'");
      ++pos;
      return frag;
    }
    const int s = add(), e = add();
    if (text[pos] == '0' || text[pos] == '1') {
      nodes[s].on[text[pos] - '0'] = e;
      ++pos;
    } else if (text[pos] == 'e') {
      nodes[s].eps.push_back(e);
      ++pos;
    } else if (text.substr(pos, 2) == "\xCE\xB5") {  // UTF-8 epsilon
      nodes[s].eps.push_back(e);
      pos += 2;
    } else {
      fail(std::string("unexpected character '") + text[pos] + "'");
    }
    return {s, e};
  }
};

}  // namespace

Dfa Kernel::regex(std::string_view pattern, const std::string& track) const {
  Thompson t;
  t.text = pattern;
  const auto [start, end] = t.alternation();
  t.skip();
  if (t.pos != pattern.size()) t.fail("unbalanced ')'");

  const std::size_t n = t.nodes.size();
  std::vector<std::vector<State>> closure(n);
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<int> stack{static_cast<int>(q)};
    seen[q] = 1;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      closure[q].push_back(static_cast<State>(p));
      for (int e : t.nodes[p].eps)
        if (!seen[e]) {
          seen[e] = 1;
          stack.push_back(e);
        }
    }
    std::sort(closure[q].begin(), closure[q].end());
  }
  std::vector<std::uint32_t> offsets(2 * n + 1, 0);
  std::vector<State> targets;
  std::vector<std::uint8_t> acc(n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    acc[q] = std::binary_search(closure[q].begin(), closure[q].end(), static_cast<State>(end));
    for (int b = 0; b < 2; ++b) {
      offsets[2 * q + b] = static_cast<std::uint32_t>(targets.size());
      std::vector<State> succ;
      for (State p : closure[q])
        if (t.nodes[p].on[b] >= 0) succ.push_back(static_cast<State>(t.nodes[p].on[b]));
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      targets.insert(targets.end(), succ.begin(), succ.end());
    }
  }
  offsets[2 * n] = static_cast<std::uint32_t>(targets.size());
  const Nfa nfa({track}, n, {static_cast<State>(start)}, std::move(offsets), std::move(targets),
                std::move(acc));
  return pad_closure(determinize(nfa));
}

// --- decoding ----------------------------------------------------------------

std::vector<std::vector<Natural>> Kernel::enumerate(const Dfa& a, std::size_t limit,
                                                    std::size_t max_length) const {
  const std::size_t n = a.num_states();
  const bool capped = max_length != 0;
  if (!capped) max_length = n;
  const std::size_t k = a.alphabet_size();
  const std::size_t r = a.arity();
  // ok[L][q]: some word of length exactly L leads from q to acceptance.
  std::vector<std::vector<std::uint8_t>> ok(1, std::vector<std::uint8_t>(n, 0));
  for (State q = 0; q < n; ++q) ok[0][q] = a.is_accepting(q);
  auto extend = [&](std::size_t L) {
    while (ok.size() <= L) {
      std::vector<std::uint8_t> row(n, 0);
      for (State q = 0; q < n; ++q)
        for (Symbol s = 0; s < k && !row[q]; ++s) row[q] = ok.back()[a.next(q, s)];
      ok.push_back(std::move(row));
    }
  };

  std::vector<std::vector<Natural>> out;
  if (a.is_accepting(a.initial()) && limit > 0) out.emplace_back(r, Natural(0));
  std::vector<Symbol> word;
  std::function<void(State, std::size_t)> walk = [&](State q, std::size_t remaining) {
    if (out.size() >= limit) return;
    if (remaining == 0) {
      out.push_back(ns_->unzip(word, r));
      return;
    }
    for (Symbol s = word.empty() ? 1 : 0; s < k; ++s) {
      const State t = a.next(q, s);
      if (!ok[remaining - 1][t]) continue;
      word.push_back(s);
      walk(t, remaining - 1);
      word.pop_back();
      if (out.size() >= limit) return;
    }
  };
  // Without a cap, keep going while words keep appearing: gaps between
  // lengths of an infinite regular language are shorter than the state count.
  std::size_t last_found = 0;
  for (std::size_t L = 1; out.size() < limit && k > 1; ++L) {
    if (capped ? L > max_length : L > std::max(max_length, last_found + n)) break;
    extend(L);
    const std::size_t before = out.size();
    walk(a.initial(), L);
    if (out.size() > before) last_found = L;
  }
  return out;
}

bool Kernel::accepts(const Dfa& a, std::span<const Natural> values) const {
  if (values.size() != a.arity()) throw std::invalid_argument("accepts: arity mismatch");
  return a.accepts(ns_->zip(values));
}

}  // namespace tribo
