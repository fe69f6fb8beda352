#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tribo/automata.hpp"
#include "tribo/bignum.hpp"
#include "tribo/dfa.hpp"
#include "tribo/numeration.hpp"

namespace tribo {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position + 1)),
        position_(position) {}
  /// 0-based offset into the query text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Compilation failure, carrying the subexpression that was being built.
class CompileError : public std::runtime_error {
 public:
  CompileError(const std::string& what, std::string subexpression, bool resource)
      : std::runtime_error(what), subexpression_(std::move(subexpression)), resource_(resource) {}
  const std::string& subexpression() const { return subexpression_; }
  /// True when the state budget ran out.
  bool resource() const { return resource_; }

 private:
  std::string subexpression_;
  bool resource_;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view cmp_text(CmpOp op);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Const, Add, Sub, Scale };
  Kind kind = Kind::Var;
  std::string name;  // Var
  Natural value;     // Const, and the factor of Scale
  TermPtr lhs, rhs;  // Add, Sub; Scale uses rhs
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Operand of a sequence comparison: NAME[index] or a letter.
struct SeqOperand {
  std::string sequence;  // empty for a letter
  TermPtr index;
  int letter = 0;
};

struct Formula {
  enum class Kind { Compare, SeqCompare, Not, And, Or, Implies, Iff, Exists, Forall, Reference };
  Kind kind = Kind::Compare;
  CmpOp op = CmpOp::Eq;
  TermPtr lhs, rhs;                   // Compare
  SeqOperand seq_lhs, seq_rhs;        // SeqCompare
  FormulaPtr left, right;             // connectives; Not and quantifiers use left
  std::vector<std::string> vars;      // quantifiers
  std::string name;                   // Reference
  std::vector<TermPtr> args;          // Reference
};

/// Parses a query. When `sequences` is given, indexing an unknown sequence
/// is an error.
FormulaPtr parse(std::string_view text, const std::set<std::string>* sequences = nullptr);

std::string to_text(const Term& t);
std::string to_text(const Formula& f);

/// Free variables in order of first appearance.
std::vector<std::string> free_variables(const Formula& f);

struct LogEntry {
  std::string text;
  std::size_t states = 0;
  double ms = 0;
};

struct CompiledPredicate {
  Dfa dfa;
  /// Track order of `dfa`: declared parameters, or else free variables in
  /// order of first appearance.
  std::vector<std::string> free_tracks;
  std::vector<LogEntry> log;
  std::size_t peak_states = 0;
  double total_ms = 0;
};

/// Everything a query may refer to.
struct Environment {
  const NumerationSystem* numeration = &tribonacci_system();
  std::map<std::string, Dfao> sequences;
  std::map<std::string, CompiledPredicate> predicates;
  Limits limits;
};

CompiledPredicate compile(const Formula& f, const Environment& env);
CompiledPredicate compile(std::string_view text, const Environment& env);
/// Tracks follow `params`, which must cover every free variable; a parameter
/// that does not occur is unconstrained. References bind arguments in this order.
CompiledPredicate compile(const Formula& f, const Environment& env,
                          const std::vector<std::string>& params);
CompiledPredicate compile(std::string_view text, const Environment& env,
                          const std::vector<std::string>& params);

/// One line per log entry, indented by its index, then the overall time.
/// Without times the ", in Tms" suffixes and the total are omitted.
std::string format_log(const CompiledPredicate& p, bool times = true);

/// {(a, b) : d1[a] op d2[b]} over tracks (a, b); a == b gives one track.
Dfa sequence_relation(const Kernel& k, const Dfao& d1, const std::string& a, CmpOp op,
                      const Dfao& d2, const std::string& b);
/// {a : d[a] op letter}.
Dfa sequence_letter(const Kernel& k, const Dfao& d, const std::string& a, CmpOp op, int letter);

}  // namespace tribo
