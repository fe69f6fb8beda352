#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tribo/bignum.hpp"
#include "tribo/dfa.hpp"
#include "tribo/numeration.hpp"

namespace tribo {

using Vector = std::vector<Rational>;
/// Row-major square matrix.
using Matrix = std::vector<Vector>;

Matrix identity_matrix(std::size_t d);
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Vector& row, const Matrix& m);
Rational dot(const Vector& a, const Vector& b);

/// a(w) = u * M_{w_1} * ... * M_{w_k} * v over binary digit strings w.
struct LinRep {
  Vector u;
  Matrix m0, m1;
  Vector v;

  std::size_t rank() const { return u.size(); }
  const Matrix& mu(int digit) const { return digit ? m1 : m0; }
};

bool operator==(const LinRep& a, const LinRep& b);

/// Counts accepted tuples of the non-parameter tracks for each value of the
/// parameter track: a(n) = #{x : (n, x) accepted}. The tracks of `a` must hold
/// canonical representations (as every compiled predicate does), so each
/// witness is one path. The initial vector is advanced over enough leading
/// zero columns that witnesses longer than (n)_T are counted too; throws
/// std::runtime_error if the count does not settle (an infinite witness set).
LinRep linrep_from_dfa(const Dfa& a, const std::string& param_track);

/// Value on one digit string, read as given (no canonicalization).
Rational eval_word(const LinRep& r, std::span<const std::uint8_t> w);
/// a(n) on the canonical representation of n.
Rational eval(const LinRep& r, const Natural& n, const NumerationSystem& ns = tribonacci_system());
/// a(0), ..., a(count - 1), sharing prefix products.
std::vector<Rational> eval_all(const LinRep& r, std::size_t count,
                               const NumerationSystem& ns = tribonacci_system());

/// Minimal-rank representation agreeing with r on every digit string.
LinRep minimize(const LinRep& r);

/// Representation of a(w) - b(w).
LinRep difference(const LinRep& a, const LinRep& b);
/// r restricted to canonical representations: zero on every other string.
LinRep restrict_to_canonical(const LinRep& r, const NumerationSystem& ns = tribonacci_system());
/// True when r is zero on every digit string.
bool is_zero(const LinRep& r);

struct Comparison {
  bool equal = false;
  /// Least n found with a(n) != b(n).
  std::optional<Natural> witness;
};

/// Compares the sequences n -> a(n) and n -> b(n). The first `horizon` values
/// are compared directly; equality is then decided exactly on all n.
Comparison linrep_equal(const LinRep& a, const LinRep& b, std::size_t horizon = 1000,
                        const NumerationSystem& ns = tribonacci_system());

/// Text form: "rank d", "u ...", "M0" and "M1" blocks of d rows, "v ...".
std::string serialize(const LinRep& r);
LinRep parse_linrep(std::string_view text);

/// Rational coefficients, constant term first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);
  static Polynomial x();
  static Polynomial constant(const Rational& c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return c_; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  Polynomial pow(unsigned k) const;

  std::string text() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// p(M) == 0 exactly.
bool annihilates(const Polynomial& p, const Matrix& m);

/// Sum of coefficient * basis term, where the basis terms are evaluated at an
/// index m: 1 (or the three residue indicators [m = r mod 3] when `mod3`), m,
/// T_m, T_{m-1}, T_{m-2}, m T_m, m T_{m-1}, m T_{m-2}.
struct ClosedForm {
  bool mod3 = false;
  std::vector<Rational> coefficients;

  static std::vector<std::string> basis_names(bool mod3);
  Rational operator()(long m) const;
  std::string text() const;
};

/// Exact fit: solves the linear system given by all samples
/// (m, value). Returns nothing when the samples admit no exact solution or do
/// not determine the coefficients.
std::optional<ClosedForm> fit_closed_form(std::span<const std::pair<long, Rational>> samples,
                                          bool mod3);

}  // namespace tribo
