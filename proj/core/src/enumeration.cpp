#include "tribo/enumeration.hpp"

#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tribo {

Matrix identity_matrix(std::size_t d) {
  Matrix m(d, Vector(d, 0));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  Matrix c(n, Vector(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (sgn(a[i][t]) == 0) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (sgn(b[t][j]) != 0) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

Vector multiply(const Vector& row, const Matrix& m) {
  Vector out(m.empty() ? 0 : m[0].size(), 0);
  for (std::size_t t = 0; t < row.size(); ++t) {
    if (sgn(row[t]) == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j)
      if (sgn(m[t][j]) != 0) out[j] += row[t] * m[t][j];
  }
  return out;
}

namespace {

Vector column_product(const Matrix& m, const Vector& column) {
  Vector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < column.size(); ++j)
      if (sgn(m[i][j]) != 0 && sgn(column[j]) != 0) out[i] += m[i][j] * column[j];
  return out;
}

bool is_zero_vector(const Vector& x) {
  for (const auto& e : x)
    if (sgn(e) != 0) return false;
  return true;
}

// Reduced row echelon basis of a growing subspace. Each row has a 1 in its
// pivot column and 0 in every other row's pivot column, so the coordinates
// of a vector of the span are its entries at the pivots.
class Span {
 public:
  bool add(Vector x) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational f = x[pivots_[i]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < x.size(); ++j)
        if (sgn(rows_[i][j]) != 0) x[j] -= f * rows_[i][j];
    }
    std::size_t p = 0;
    while (p < x.size() && sgn(x[p]) == 0) ++p;
    if (p == x.size()) return false;
    const Rational lead = x[p];
    for (auto& e : x) e /= lead;
    for (auto& row : rows_) {
      const Rational f = row[p];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < x.size(); ++j)
        if (sgn(x[j]) != 0) row[j] -= f * x[j];
    }
    rows_.push_back(std::move(x));
    pivots_.push_back(p);
    return true;
  }

  Vector coordinates(const Vector& x) const {
    Vector c(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = x[pivots_[i]];
    return c;
  }

  std::size_t size() const { return rows_.size(); }
  const Vector& row(std::size_t i) const { return rows_[i]; }

 private:
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

struct Generator {
  Vector vec;
  Word word;
};

// Breadth-first closure of {start * mu(w)} (or {mu(w) * start} when
// `columns`), with the word that produced each generator.
std::vector<Generator> closure(const LinRep& r, const Vector& start, bool columns, Span& span) {
  std::vector<Generator> gens;
  if (!span.add(start)) return gens;
  gens.push_back({start, {}});
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (int b = 0; b < 2; ++b) {
      Vector next = columns ? column_product(r.mu(b), gens[i].vec) : multiply(gens[i].vec, r.mu(b));
      if (!span.add(next)) continue;
      Word w = gens[i].word;
      if (columns) w.insert(w.begin(), static_cast<std::uint8_t>(b));
      else w.push_back(static_cast<std::uint8_t>(b));
      gens.push_back({std::move(next), std::move(w)});
    }
  return gens;
}

LinRep zero_rep() { return LinRep{}; }

LinRep reduce_reachable(const LinRep& r) {
  Span span;
  closure(r, r.u, false, span);
  const std::size_t k = span.size();
  if (k == 0) return zero_rep();
  LinRep out;
  out.u = span.coordinates(r.u);
  out.m0.resize(k);
  out.m1.resize(k);
  out.v.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.m0[i] = span.coordinates(multiply(span.row(i), r.m0));
    out.m1[i] = span.coordinates(multiply(span.row(i), r.m1));
    out.v[i] = dot(span.row(i), r.v);
  }
  return out;
}

LinRep reduce_observable(const LinRep& r) {
  Span span;
  closure(r, r.v, true, span);
  const std::size_t k = span.size();
  if (k == 0) return zero_rep();
  LinRep out;
  out.v = span.coordinates(r.v);
  out.u.resize(k);
  out.m0.assign(k, Vector(k));
  out.m1.assign(k, Vector(k));
  for (std::size_t j = 0; j < k; ++j) {
    out.u[j] = dot(r.u, span.row(j));
    const Vector c0 = span.coordinates(column_product(r.m0, span.row(j)));
    const Vector c1 = span.coordinates(column_product(r.m1, span.row(j)));
    for (std::size_t i = 0; i < k; ++i) {
      out.m0[i][j] = c0[i];
      out.m1[i][j] = c1[i];
    }
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw std::invalid_argument("not a rational number: '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace

Rational dot(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

bool operator==(const LinRep& a, const LinRep& b) {
  return a.u == b.u && a.m0 == b.m0 && a.m1 == b.m1 && a.v == b.v;
}

bool is_zero(const LinRep& r) {
  Span span;
  for (const auto& g : closure(r, r.u, false, span))
    if (sgn(dot(g.vec, r.v)) != 0) return false;
  return true;
}

LinRep linrep_from_dfa(const Dfa& a, const std::string& param_track) {
  if (!a.has_track(param_track))
    throw std::invalid_argument("linrep_from_dfa: no track named '" + param_track + "'");
  std::vector<std::string> order{param_track};
  for (const auto& t : a.tracks())
    if (t != param_track) order.push_back(t);
  const Dfa b = reorder(a, order);
  const std::size_t shift = b.arity() - 1;
  const std::size_t columns = std::size_t{1} << shift;

  std::vector<std::uint8_t> reach(b.num_states(), 0);
  std::vector<State> stack{b.initial()};
  reach[b.initial()] = 1;
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    for (Symbol s = 0; s < b.alphabet_size(); ++s)
      if (!reach[b.next(q, s)]) {
        reach[b.next(q, s)] = 1;
        stack.push_back(b.next(q, s));
      }
  }
  const auto live = coreachable(b);
  std::vector<std::size_t> index(b.num_states(), SIZE_MAX);
  std::size_t d = 0;
  for (State q = 0; q < b.num_states(); ++q)
    if (reach[q] && live[q]) index[q] = d++;
  if (d == 0 || index[b.initial()] == SIZE_MAX) return zero_rep();

  LinRep r;
  r.u.assign(d, 0);
  r.v.assign(d, 0);
  r.m0.assign(d, Vector(d, 0));
  r.m1.assign(d, Vector(d, 0));
  r.u[index[b.initial()]] = 1;
  for (State q = 0; q < b.num_states(); ++q) {
    if (index[q] == SIZE_MAX) continue;
    if (b.is_accepting(q)) r.v[index[q]] = 1;
    for (int digit = 0; digit < 2; ++digit)
      for (std::size_t c = 0; c < columns; ++c) {
        const State t = b.next(q, static_cast<Symbol>((static_cast<std::size_t>(digit) << shift) | c));
        if (index[t] != SIZE_MAX) (digit ? r.m1 : r.m0)[index[q]][index[t]] += 1;
      }
  }

  // Advance u over leading zeros until one more zero changes nothing.
  for (std::size_t k = 0; k <= d + 1; ++k) {
    LinRep delta = r;
    const Vector next = multiply(r.u, r.m0);
    for (std::size_t i = 0; i < d; ++i) delta.u[i] = r.u[i] - next[i];
    if (is_zero(delta)) return r;
    r.u = next;
  }
  throw std::runtime_error("linrep_from_dfa: counts do not settle; the witness set is infinite for some parameter");
}

Rational eval_word(const LinRep& r, std::span<const std::uint8_t> w) {
  Vector x = r.u;
  for (auto b : w) x = multiply(x, r.mu(b));
  return dot(x, r.v);
}

Rational eval(const LinRep& r, const Natural& n, const NumerationSystem& ns) {
  return eval_word(r, ns.canonical_rep(n));
}

std::vector<Rational> eval_all(const LinRep& r, std::size_t count, const NumerationSystem& ns) {
  std::vector<Rational> out;
  if (count == 0) return out;
  out.reserve(count);
  out.push_back(dot(r.u, r.v));
  const Dfa& valid = ns.validity();
  const auto live = coreachable(valid);
  std::function<void(State, std::size_t, const Vector&, bool)> walk =
      [&](State q, std::size_t remaining, const Vector& x, bool first) {
        if (out.size() >= count) return;
        if (remaining == 0) {
          if (valid.is_accepting(q)) out.push_back(dot(x, r.v));
          return;
        }
        for (int b = first ? 1 : 0; b < 2 && out.size() < count; ++b) {
          const State t = valid.next(q, static_cast<Symbol>(b));
          if (!live[t]) continue;
          walk(t, remaining - 1, multiply(x, r.mu(b)), false);
        }
      };
  for (std::size_t len = 1; out.size() < count; ++len) {
    if (len > 4096) throw std::logic_error("eval_all: validity language too sparse");
    walk(valid.initial(), len, r.u, true);
  }
  return out;
}

LinRep minimize(const LinRep& r) { return reduce_observable(reduce_reachable(r)); }

LinRep difference(const LinRep& a, const LinRep& b) {
  const std::size_t n = a.rank(), m = b.rank();
  LinRep d;
  d.u.assign(n + m, 0);
  d.v.assign(n + m, 0);
  d.m0.assign(n + m, Vector(n + m, 0));
  d.m1.assign(n + m, Vector(n + m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    d.u[i] = a.u[i];
    d.v[i] = a.v[i];
    for (std::size_t j = 0; j < n; ++j) {
      d.m0[i][j] = a.m0[i][j];
      d.m1[i][j] = a.m1[i][j];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    d.u[n + i] = -b.u[i];
    d.v[n + i] = b.v[i];
    for (std::size_t j = 0; j < m; ++j) {
      d.m0[n + i][n + j] = b.m0[i][j];
      d.m1[n + i][n + j] = b.m1[i][j];
    }
  }
  return d;
}

LinRep restrict_to_canonical(const LinRep& r, const NumerationSystem& ns) {
  // Automaton for canonical words: validity plus "no leading zero", as
  // states (validity state, started); the empty word is canonical.
  const Dfa& valid = ns.validity();
  const std::size_t s = valid.num_states();
  const std::size_t states = 2 * s;
  auto id = [&](State q, bool started) { return 2 * static_cast<std::size_t>(q) + (started ? 1 : 0); };
  const std::size_t d = r.rank();
  LinRep out;
  out.u.assign(d * states, 0);
  out.v.assign(d * states, 0);
  out.m0.assign(d * states, Vector(d * states, 0));
  out.m1.assign(d * states, Vector(d * states, 0));
  for (std::size_t i = 0; i < d; ++i) {
    out.u[i * states + id(valid.initial(), false)] = r.u[i];
    for (State q = 0; q < s; ++q)
      if (valid.is_accepting(q))
        for (bool started : {false, true}) out.v[i * states + id(q, started)] = r.v[i];
  }
  for (int b = 0; b < 2; ++b) {
    Matrix& m = b ? out.m1 : out.m0;
    const Matrix& src = r.mu(b);
    for (State q = 0; q < s; ++q)
      for (bool started : {false, true}) {
        if (!started && b == 0) continue;
        const std::size_t from = id(q, started);
        const std::size_t to = id(valid.next(q, static_cast<Symbol>(b)), true);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            if (sgn(src[i][j]) != 0) m[i * states + from][j * states + to] = src[i][j];
      }
  }
  return out;
}

Comparison linrep_equal(const LinRep& a, const LinRep& b, std::size_t horizon,
                        const NumerationSystem& ns) {
  const LinRep ma = minimize(a), mb = minimize(b);
  const auto va = eval_all(ma, horizon, ns);
  const auto vb = eval_all(mb, horizon, ns);
  for (std::size_t n = 0; n < horizon; ++n)
    if (va[n] != vb[n]) return {false, natural(n)};
  const LinRep d = restrict_to_canonical(difference(ma, mb), ns);
  Span span;
  for (const auto& g : closure(d, d.u, false, span))
    if (sgn(dot(g.vec, d.v)) != 0) return {false, ns.value_of(g.word)};
  return {true, std::nullopt};
}

std::string serialize(const LinRep& r) {
  std::ostringstream out;
  auto row = [&](const Vector& x) {
    for (std::size_t i = 0; i < x.size(); ++i) out << (i ? " " : "") << to_string(x[i]);
  };
  out << "rank " << r.rank() << "\nu";
  for (const auto& e : r.u) out << ' ' << to_string(e);
  for (int b = 0; b < 2; ++b) {
    out << "\nM" << b;
    for (const auto& x : r.mu(b)) {
      out << '\n';
      row(x);
    }
  }
  out << "\nv";
  for (const auto& e : r.v) out << ' ' << to_string(e);
  out << '\n';
  return out.str();
}

LinRep parse_linrep(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string word;
  auto expect = [&](const std::string& key) {
    if (!(in >> word) || word != key)
      throw std::invalid_argument("linear representation: expected '" + key + "'");
  };
  auto number = [&] {
    if (!(in >> word)) throw std::invalid_argument("linear representation: truncated");
    return parse_rational(word);
  };
  expect("rank");
  std::size_t d = 0;
  if (!(in >> d)) throw std::invalid_argument("linear representation: bad rank");
  LinRep r;
  expect("u");
  for (std::size_t i = 0; i < d; ++i) r.u.push_back(number());
  for (int b = 0; b < 2; ++b) {
    expect(b ? "M1" : "M0");
    Matrix& m = b ? r.m1 : r.m0;
    m.assign(d, Vector(d));
    for (auto& x : m)
      for (auto& e : x) e = number();
  }
  expect("v");
  for (std::size_t i = 0; i < d; ++i) r.v.push_back(number());
  if (in >> word) throw std::invalid_argument("linear representation: trailing text '" + word + "'");
  return r;
}

Polynomial::Polynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::x() { return Polynomial({0, 1}); }
Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

void Polynomial::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + b * Polynomial::constant(-1);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return Polynomial();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial out = constant(1);
  for (unsigned i = 0; i < k; ++i) out = out * *this;
  return out;
}

std::string Polynomial::text() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Rational& c = c_[i];
    if (sgn(c) == 0) continue;
    const Rational mag = abs(c);
    if (!s.empty()) s += sgn(c) < 0 ? " - " : " + ";
    else if (sgn(c) < 0) s += "-";
    if (i == 0 || mag != 1) s += to_string(Rational(mag));
    if (i > 0) s += i == 1 ? "x" : "x^" + std::to_string(i);
  }
  return s;
}

bool annihilates(const Polynomial& p, const Matrix& m) {
  const std::size_t d = m.size();
  Matrix acc(d, Vector(d, 0));
  const auto& c = p.coefficients();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = multiply(acc, m);
    for (std::size_t j = 0; j < d; ++j) acc[j][j] += c[i];
  }
  for (const auto& row : acc)
    if (!is_zero_vector(row)) return false;
  return true;
}

std::vector<std::string> ClosedForm::basis_names(bool mod3) {
  std::vector<std::string> names;
  if (mod3) names = {"[n%3=0]", "[n%3=1]", "[n%3=2]"};
  else names = {"1"};
  for (const char* t : {"n", "T_n", "T_{n-1}", "T_{n-2}", "n*T_n", "n*T_{n-1}", "n*T_{n-2}"})
    names.emplace_back(t);
  return names;
}

namespace {

std::vector<Rational> basis_values(bool mod3, long m) {
  if (m < 2) throw std::invalid_argument("closed forms are defined for indices >= 2");
  const auto u = static_cast<unsigned>(m);
  const Rational n = Natural(std::to_string(m));
  const Rational t0 = Rational(tribonacci(u)), t1 = Rational(tribonacci(u - 1)),
                 t2 = Rational(tribonacci(u - 2));
  std::vector<Rational> out;
  if (mod3)
    for (long r = 0; r < 3; ++r) out.emplace_back(m % 3 == r ? 1 : 0);
  else
    out.emplace_back(1);
  for (Rational x : {n, t0, t1, t2, Rational(n * t0), Rational(n * t1), Rational(n * t2)}) out.push_back(x);
  return out;
}

}  // namespace

Rational ClosedForm::operator()(long m) const {
  const auto b = basis_values(mod3, m);
  Rational s = 0;
  for (std::size_t i = 0; i < b.size(); ++i) s += coefficients[i] * b[i];
  return s;
}

std::string ClosedForm::text() const {
  const auto names = basis_names(mod3);
  std::string s;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const Rational& c = coefficients[i];
    if (sgn(c) == 0) continue;
    if (!s.empty()) s += sgn(c) < 0 ? " - " : " + ";
    else if (sgn(c) < 0) s += "-";
    const Rational mag = abs(c);
    if (names[i] == "1") {
      s += to_string(mag);
      continue;
    }
    if (mag != 1) s += to_string(mag) + "*";
    s += names[i];
  }
  return s.empty() ? "0" : s;
}

std::optional<ClosedForm> fit_closed_form(std::span<const std::pair<long, Rational>> samples,
                                          bool mod3) {
  const std::size_t k = ClosedForm::basis_names(mod3).size();
  Matrix rows;
  for (const auto& [m, value] : samples) {
    Vector row = basis_values(mod3, m);
    row.push_back(value);
    rows.push_back(std::move(row));
  }
  // Gauss-Jordan on the augmented system.
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < k && rank < rows.size(); ++col) {
    std::size_t p = rank;
    while (p < rows.size() && sgn(rows[p][col]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    const Rational lead = rows[rank][col];
    for (auto& e : rows[rank]) e /= lead;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || sgn(rows[i][col]) == 0) continue;
      const Rational f = rows[i][col];
      for (std::size_t j = col; j <= k; ++j) rows[i][j] -= f * rows[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank < k) return std::nullopt;
  for (std::size_t i = rank; i < rows.size(); ++i)
    if (sgn(rows[i][k]) != 0) return std::nullopt;
  ClosedForm f;
  f.mod3 = mod3;
  f.coefficients.assign(k, 0);
  for (std::size_t i = 0; i < rank; ++i) f.coefficients[pivot_col[i]] = rows[i][k];
  return f;
}

}  // namespace tribo
