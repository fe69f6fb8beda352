#include "tribo/dfa.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "text_format.hpp"

namespace tribo {

std::string symbol_text(Symbol s, std::size_t arity) {
  std::string out = "[";
  for (std::size_t t = 0; t < arity; ++t) {
    if (t) out += ',';
    out += static_cast<char>('0' + symbol_bit(s, t, arity));
  }
  out += ']';
  return out;
}

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa() : tracks_{}, initial_{0}, delta_{0}, accepting_{0} {}

Dfa::Dfa(std::vector<std::string> tracks, std::size_t num_states, State initial,
         std::vector<State> transitions, std::vector<std::uint8_t> accepting)
    : tracks_(std::move(tracks)),
      initial_(initial),
      delta_(std::move(transitions)),
      accepting_(std::move(accepting)) {
  if (tracks_.size() > 24) throw std::invalid_argument("dfa: too many tracks");
  std::set<std::string> seen(tracks_.begin(), tracks_.end());
  if (seen.size() != tracks_.size()) throw std::invalid_argument("dfa: duplicate track name");
  if (num_states == 0) throw std::invalid_argument("dfa: needs at least one state");
  if (accepting_.size() != num_states) throw std::invalid_argument("dfa: accepting size mismatch");
  if (delta_.size() != num_states * alphabet_size())
    throw std::invalid_argument("dfa: transition table size mismatch");
  if (initial_ >= num_states) throw std::invalid_argument("dfa: initial state out of range");
  for (State q : delta_)
    if (q >= num_states) throw std::invalid_argument("dfa: transition target out of range");
}

Dfa Dfa::constant(bool value, std::vector<std::string> tracks) {
  const std::size_t k = std::size_t{1} << tracks.size();
  return Dfa(std::move(tracks), 1, 0, std::vector<State>(k, 0),
             std::vector<std::uint8_t>{static_cast<std::uint8_t>(value)});
}

std::optional<std::size_t> Dfa::track_index(std::string_view name) const {
  for (std::size_t i = 0; i < tracks_.size(); ++i)
    if (tracks_[i] == name) return i;
  return std::nullopt;
}

State Dfa::run(std::span<const Symbol> word) const {
  State q = initial_;
  for (Symbol a : word) q = next(q, a);
  return q;
}

bool Dfa::accepts(std::span<const Symbol> word) const { return is_accepting(run(word)); }

bool Dfa::truth() const {
  if (arity() != 0) throw std::logic_error("truth(): automaton still has free tracks");
  return is_accepting(initial_);
}

Dfa Dfa::with_tracks(std::vector<std::string> names) const {
  if (names.size() != tracks_.size()) throw std::invalid_argument("with_tracks: arity mismatch");
  return Dfa(std::move(names), num_states(), initial_, delta_, accepting_);
}

// ---------------------------------------------------------------------------
// Nfa

Nfa::Nfa(std::vector<std::string> tracks, std::size_t num_states, std::vector<State> initial,
         std::vector<std::uint32_t> offsets, std::vector<State> targets,
         std::vector<std::uint8_t> accepting)
    : tracks_(std::move(tracks)),
      initial_(std::move(initial)),
      offsets_(std::move(offsets)),
      targets_(std::move(targets)),
      accepting_(std::move(accepting)) {
  if (accepting_.size() != num_states) throw std::invalid_argument("nfa: accepting size mismatch");
  if (offsets_.size() != num_states * alphabet_size() + 1)
    throw std::invalid_argument("nfa: offsets size mismatch");
}

bool Nfa::accepts(std::span<const Symbol> word) const {
  std::vector<State> current = initial_;
  for (Symbol a : word) {
    std::set<State> next;
    for (State q : current)
      for (State r : successors(q, a)) next.insert(r);
    current.assign(next.begin(), next.end());
  }
  return std::any_of(current.begin(), current.end(), [&](State q) { return is_accepting(q); });
}

// ---------------------------------------------------------------------------
// Dfao

Dfao::Dfao(std::size_t num_states, State initial, std::vector<State> transitions,
           std::vector<int> outputs)
    : initial_(initial), delta_(std::move(transitions)), outputs_(std::move(outputs)) {
  if (outputs_.size() != num_states || delta_.size() != 2 * num_states || initial_ >= num_states)
    throw std::invalid_argument("dfao: inconsistent sizes");
  for (State q : delta_)
    if (q >= num_states) throw std::invalid_argument("dfao: transition target out of range");
}

int Dfao::evaluate(std::span<const std::uint8_t> digits) const {
  State q = initial_;
  for (std::uint8_t d : digits) q = next(q, d);
  return outputs_[q];
}

// ---------------------------------------------------------------------------
// Minimization: Valmari-Lehtinen partition refinement (Hopcroft's strategy on
// refinable partitions of states and of transitions).

namespace {

struct RefinablePartition {
  std::uint32_t count = 0;
  std::vector<std::uint32_t> elems, loc, set_of, first, past, marked, touched;
  std::uint32_t num_touched = 0;

  explicit RefinablePartition(std::uint32_t n)
      : elems(n), loc(n), set_of(n, 0), first(n + 1, 0), past(n + 1, 0), marked(n + 1, 0),
        touched(n + 1, 0) {
    std::iota(elems.begin(), elems.end(), 0U);
    std::iota(loc.begin(), loc.end(), 0U);
    count = n ? 1 : 0;
    if (n) past[0] = n;
  }

  void mark(std::uint32_t e) {
    const std::uint32_t s = set_of[e];
    const std::uint32_t i = loc[e];
    const std::uint32_t j = first[s] + marked[s];
    elems[i] = elems[j];
    loc[elems[i]] = i;
    elems[j] = e;
    loc[e] = j;
    if (!marked[s]++) touched[num_touched++] = s;
  }

  void split() {
    while (num_touched) {
      const std::uint32_t s = touched[--num_touched];
      const std::uint32_t j = first[s] + marked[s];
      if (j == past[s]) {
        marked[s] = 0;
        continue;
      }
      // The smaller half becomes the new set.
      if (marked[s] <= past[s] - j) {
        first[count] = first[s];
        past[count] = first[s] = j;
      } else {
        past[count] = past[s];
        first[count] = past[s] = j;
      }
      for (std::uint32_t i = first[count]; i < past[count]; ++i) set_of[elems[i]] = count;
      marked[s] = marked[count++] = 0;
    }
  }
};

// BFS renumbering of a complete automaton given as successor function.
template <typename Next>
std::vector<State> bfs_order(std::size_t n, State init, std::size_t k, Next next) {
  std::vector<State> order(n, kNoState);
  std::vector<State> queue{init};
  order[init] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const State q = queue[head];
    for (Symbol a = 0; a < k; ++a) {
      const State r = next(q, a);
      if (order[r] == kNoState) {
        order[r] = static_cast<State>(queue.size());
        queue.push_back(r);
      }
    }
  }
  return order;
}

}  // namespace

Dfa minimize(const Dfa& a) {
  const std::size_t n = a.num_states();
  const std::size_t k = a.alphabet_size();

  std::vector<std::uint8_t> useful(n, 0);
  {
    std::vector<State> queue{a.initial()};
    useful[a.initial()] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (Symbol s = 0; s < k; ++s) {
        const State r = a.next(queue[h], s);
        if (!useful[r]) {
          useful[r] = 1;
          queue.push_back(r);
        }
      }
    const auto co = coreachable(a);
    for (std::size_t q = 0; q < n; ++q) useful[q] = useful[q] && co[q];
  }
  if (!useful[a.initial()]) return Dfa::constant(false, a.tracks());

  std::vector<State> index(n, kNoState);
  std::uint32_t u = 0;
  for (std::size_t q = 0; q < n; ++q)
    if (useful[q]) index[q] = u++;

  std::vector<std::uint32_t> tail, label, head;
  tail.reserve(static_cast<std::size_t>(u) * k);
  label.reserve(static_cast<std::size_t>(u) * k);
  head.reserve(static_cast<std::size_t>(u) * k);
  for (std::size_t q = 0; q < n; ++q) {
    if (!useful[q]) continue;
    for (Symbol s = 0; s < k; ++s) {
      const State r = a.next(static_cast<State>(q), s);
      if (!useful[r]) continue;
      tail.push_back(index[q]);
      label.push_back(s);
      head.push_back(index[r]);
    }
  }
  const auto m = static_cast<std::uint32_t>(tail.size());

  RefinablePartition blocks(u);
  for (std::size_t q = 0; q < n; ++q)
    if (useful[q] && a.is_accepting(static_cast<State>(q))) blocks.mark(index[q]);
  blocks.split();

  RefinablePartition cords(m);
  if (m) {
    // Transitions are generated grouped by tail; a stable counting sort by
    // label gives the initial cords.
    std::vector<std::uint32_t> label_start(k + 1, 0);
    for (std::uint32_t t = 0; t < m; ++t) ++label_start[label[t] + 1];
    for (std::size_t s = 0; s < k; ++s) label_start[s + 1] += label_start[s];
    std::vector<std::uint32_t> fill(label_start.begin(), label_start.end() - 1);
    for (std::uint32_t t = 0; t < m; ++t) {
      const std::uint32_t pos = fill[label[t]]++;
      cords.elems[pos] = t;
      cords.loc[t] = pos;
    }
    cords.count = 0;
    for (std::size_t s = 0; s < k; ++s) {
      if (label_start[s] == label_start[s + 1]) continue;
      cords.first[cords.count] = label_start[s];
      cords.past[cords.count] = label_start[s + 1];
      for (std::uint32_t i = label_start[s]; i < label_start[s + 1]; ++i)
        cords.set_of[cords.elems[i]] = cords.count;
      ++cords.count;
    }
  }

  // Incoming transitions per state.
  std::vector<std::uint32_t> in_start(u + 1, 0), incoming(m);
  for (std::uint32_t t = 0; t < m; ++t) ++in_start[head[t] + 1];
  for (std::uint32_t q = 0; q < u; ++q) in_start[q + 1] += in_start[q];
  {
    std::vector<std::uint32_t> fill(in_start.begin(), in_start.end() - 1);
    for (std::uint32_t t = 0; t < m; ++t) incoming[fill[head[t]]++] = t;
  }

  std::uint32_t b = 1;
  std::uint32_t c = 0;
  while (c < cords.count) {
    for (std::uint32_t i = cords.first[c]; i < cords.past[c]; ++i)
      blocks.mark(tail[cords.elems[i]]);
    blocks.split();
    ++c;
    while (b < blocks.count) {
      for (std::uint32_t i = blocks.first[b]; i < blocks.past[b]; ++i) {
        const std::uint32_t q = blocks.elems[i];
        for (std::uint32_t j = in_start[q]; j < in_start[q + 1]; ++j) cords.mark(incoming[j]);
      }
      cords.split();
      ++b;
    }
  }

  // Quotient automaton, completed with a sink when some transition is absent.
  const std::uint32_t nb = blocks.count;
  const State sink = nb;
  std::vector<State> delta(static_cast<std::size_t>(nb + 1) * k, sink);
  std::vector<std::uint8_t> acc(nb + 1, 0);
  for (std::uint32_t t = 0; t < m; ++t)
    delta[static_cast<std::size_t>(blocks.set_of[tail[t]]) * k + label[t]] =
        blocks.set_of[head[t]];
  for (std::size_t q = 0; q < n; ++q)
    if (useful[q] && a.is_accepting(static_cast<State>(q))) acc[blocks.set_of[index[q]]] = 1;

  const State init = blocks.set_of[index[a.initial()]];
  const auto order = bfs_order(nb + 1, init, k, [&](State q, Symbol s) {
    return q == sink ? sink : delta[static_cast<std::size_t>(q) * k + s];
  });
  std::size_t total = 0;
  for (State o : order)
    if (o != kNoState) ++total;

  std::vector<State> out(total * k);
  std::vector<std::uint8_t> out_acc(total, 0);
  for (State q = 0; q <= nb; ++q) {
    if (order[q] == kNoState) continue;
    out_acc[order[q]] = acc[q];
    for (Symbol s = 0; s < k; ++s)
      out[static_cast<std::size_t>(order[q]) * k + s] =
          order[q == sink ? sink : delta[static_cast<std::size_t>(q) * k + s]];
  }
  return Dfa(a.tracks(), total, 0, std::move(out), std::move(out_acc));
}

std::size_t live_states(const Dfa& a) {
  std::size_t sinks = 0;
  for (State q = 0; q < a.num_states(); ++q) {
    if (q == a.initial() || a.is_accepting(q)) continue;
    bool loop = true;
    for (Symbol s = 0; s < a.alphabet_size() && loop; ++s) loop = a.next(q, s) == q;
    if (loop) ++sinks;
  }
  return a.num_states() - sinks;
}

Dfao minimize(const Dfao& d) {
  const std::size_t n = d.num_states();
  std::vector<std::uint8_t> reach(n, 0);
  std::vector<State> queue{d.initial()};
  reach[d.initial()] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (int b = 0; b < 2; ++b) {
      const State r = d.next(queue[h], b);
      if (!reach[r]) {
        reach[r] = 1;
        queue.push_back(r);
      }
    }

  // Moore refinement; these automata are small.
  std::vector<std::uint32_t> cls(n, 0);
  {
    std::map<int, std::uint32_t> ids;
    for (State q : queue) cls[q] = ids.emplace(d.output(q), ids.size()).first->second;
  }
  std::size_t classes = 0;
  for (;;) {
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n, 0);
    for (State q : queue) {
      auto key = std::make_tuple(cls[q], cls[d.next(q, 0)], cls[d.next(q, 1)]);
      next[q] = ids.emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
    }
    const std::size_t now = ids.size();
    cls = std::move(next);
    if (now == classes) break;
    classes = now;
  }

  std::vector<State> rep(classes, kNoState);
  for (State q : queue)
    if (rep[cls[q]] == kNoState) rep[cls[q]] = q;
  const auto order = bfs_order(classes, cls[d.initial()], 2,
                               [&](State c, Symbol b) { return cls[d.next(rep[c], static_cast<int>(b))]; });
  std::vector<State> delta(2 * classes);
  std::vector<int> out(classes);
  for (State c = 0; c < classes; ++c) {
    out[order[c]] = d.output(rep[c]);
    for (int b = 0; b < 2; ++b) delta[2 * order[c] + b] = order[cls[d.next(rep[c], b)]];
  }
  return Dfao(classes, 0, std::move(delta), std::move(out));
}

// ---------------------------------------------------------------------------
// Queries

std::vector<std::uint8_t> coreachable(const Dfa& a) {
  const std::size_t n = a.num_states();
  const std::size_t k = a.alphabet_size();
  std::vector<std::uint32_t> start(n + 1, 0);
  for (State q = 0; q < n; ++q)
    for (Symbol s = 0; s < k; ++s) ++start[a.next(q, s) + 1];
  for (std::size_t q = 0; q < n; ++q) start[q + 1] += start[q];
  std::vector<State> pred(start[n]);
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (State q = 0; q < n; ++q)
      for (Symbol s = 0; s < k; ++s) pred[fill[a.next(q, s)]++] = q;
  }
  std::vector<std::uint8_t> co(n, 0);
  std::vector<State> queue;
  for (State q = 0; q < n; ++q)
    if (a.is_accepting(q)) {
      co[q] = 1;
      queue.push_back(q);
    }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const State r = queue[h];
    for (std::uint32_t i = start[r]; i < start[r + 1]; ++i)
      if (!co[pred[i]]) {
        co[pred[i]] = 1;
        queue.push_back(pred[i]);
      }
  }
  return co;
}

bool is_empty(const Dfa& a) {
  std::vector<std::uint8_t> seen(a.num_states(), 0);
  std::vector<State> queue{a.initial()};
  seen[a.initial()] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    if (a.is_accepting(queue[h])) return false;
    for (Symbol s = 0; s < a.alphabet_size(); ++s) {
      const State r = a.next(queue[h], s);
      if (!seen[r]) {
        seen[r] = 1;
        queue.push_back(r);
      }
    }
  }
  return true;
}

Dfa reorder(const Dfa& a, const std::vector<std::string>& order) {
  const std::size_t r = a.arity();
  if (order.size() != r) throw std::invalid_argument("reorder: track set mismatch");
  std::vector<std::size_t> from(r);
  for (std::size_t i = 0; i < r; ++i) {
    auto idx = a.track_index(order[i]);
    if (!idx) throw std::invalid_argument("reorder: unknown track '" + order[i] + "'");
    from[i] = *idx;
  }
  if (order == a.tracks()) return a;
  const std::size_t k = a.alphabet_size();
  std::vector<Symbol> old_symbol(k);
  for (Symbol s = 0; s < k; ++s) {
    Symbol o = 0;
    for (std::size_t i = 0; i < r; ++i)
      if (symbol_bit(s, i, r)) o |= Symbol{1} << (r - 1 - from[i]);
    old_symbol[s] = o;
  }
  std::vector<State> delta(a.num_states() * k);
  for (State q = 0; q < a.num_states(); ++q)
    for (Symbol s = 0; s < k; ++s) delta[q * k + s] = a.next(q, old_symbol[s]);
  return Dfa(order, a.num_states(), a.initial(), std::move(delta),
             std::vector<std::uint8_t>(a.accepting().begin(), a.accepting().end()));
}

bool language_equal(const Dfa& a, const Dfa& b) {
  if (a.arity() != b.arity()) return false;
  for (const auto& t : a.tracks())
    if (!b.has_track(t)) return false;
  const Dfa x = minimize(a);
  const Dfa y = minimize(reorder(b, a.tracks()));
  return x.num_states() == y.num_states() &&
         std::equal(x.transitions().begin(), x.transitions().end(), y.transitions().begin()) &&
         std::equal(x.accepting().begin(), x.accepting().end(), y.accepting().begin());
}

// ---------------------------------------------------------------------------
// Text formats

std::string serialize(const Dfa& a) {
  std::ostringstream out;
  out << "tracks";
  for (const auto& t : a.tracks()) out << ' ' << t;
  out << "\nstates " << a.num_states() << "\ninitial " << a.initial() << "\naccepting";
  for (State q = 0; q < a.num_states(); ++q)
    if (a.is_accepting(q)) out << ' ' << q;
  out << '\n';
  for (State q = 0; q < a.num_states(); ++q)
    for (Symbol s = 0; s < a.alphabet_size(); ++s)
      out << q << ' ' << symbol_text(s, a.arity()) << ' ' << a.next(q, s) << '\n';
  return out.str();
}

Dfa parse_automaton(std::string_view text) {
  detail::LineReader reader(text);
  return detail::read_automaton(reader, std::nullopt, {});
}

namespace {

std::string dot_edges(std::size_t n, std::size_t arity,
                      const std::function<State(State, Symbol)>& next) {
  std::ostringstream out;
  const std::size_t k = std::size_t{1} << arity;
  for (State q = 0; q < n; ++q) {
    std::map<State, std::string> labels;
    for (Symbol s = 0; s < k; ++s) {
      auto& l = labels[next(q, s)];
      if (!l.empty()) l += ", ";
      l += arity == 1 ? std::to_string(s) : symbol_text(s, arity);
    }
    for (const auto& [r, l] : labels)
      out << "  " << q << " -> " << r << " [label=\"" << l << "\"];\n";
  }
  return out.str();
}

}  // namespace

std::string to_dot(const Dfa& a, std::string_view name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n"
      << "  __start [shape=point];\n  __start -> " << a.initial() << ";\n";
  for (State q = 0; q < a.num_states(); ++q)
    out << "  " << q << " [shape=" << (a.is_accepting(q) ? "doublecircle" : "circle") << "];\n";
  out << dot_edges(a.num_states(), a.arity(), [&](State q, Symbol s) { return a.next(q, s); });
  out << "}\n";
  return out.str();
}

std::string to_dot(const Dfao& d, std::string_view name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n"
      << "  __start [shape=point];\n  __start -> " << d.initial() << ";\n";
  for (State q = 0; q < d.num_states(); ++q)
    out << "  " << q << " [label=\"" << q << '/' << d.output(q) << "\"];\n";
  out << dot_edges(d.num_states(), 1,
                   [&](State q, Symbol s) { return d.next(q, static_cast<int>(s)); });
  out << "}\n";
  return out.str();
}

}  // namespace tribo
