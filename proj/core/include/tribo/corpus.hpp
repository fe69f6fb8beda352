#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tribo/automata.hpp"
#include "tribo/logic.hpp"

namespace tribo {

using Tuple = std::vector<std::uint64_t>;

/// A named predicate a case compiles before checking anything. Tracks follow
/// `params` when given.
struct Definition {
  std::string name;
  std::vector<std::string> params;
  std::string query;
};

struct Outcome {
  bool pass = false;
  std::string witness;  // first mismatch, empty on success
  std::string detail;   // short human-readable summary
};

class CaseContext;

struct Expectation {
  enum class Kind { Empty, All, Language, States, LiveStates, Decoded, Custom };
  Kind kind = Kind::Empty;
  std::string predicate;
  std::string regex;        // Language, over the single track
  std::size_t states = 0;   // States, LiveStates
  std::uint64_t bound = 0;  // Decoded: every component <= bound
  std::function<std::set<Tuple>(std::uint64_t bound)> expected;  // Decoded
  std::function<Outcome(CaseContext&)> check;                    // Custom
  std::string label;        // names the expectation in reports
};

struct TheoremCase {
  int id = 0;
  std::string slug;
  std::string title;
  /// Long-running (minutes rather than seconds); left out by --skip-slow.
  bool slow = false;
  std::vector<Definition> definitions;
  std::vector<Expectation> expectations;
};

enum class CaseStatus { Pass, Fail, Error, Skipped };
std::string status_text(CaseStatus s);

struct CaseReport {
  int id = 0;
  std::string slug;
  std::string title;
  CaseStatus status = CaseStatus::Skipped;
  std::string witness;
  std::vector<std::string> details;
  std::size_t peak_states = 0;
  double seconds = 0;
};

/// What a case sees while running: the sequences T and B, a kernel, and the
/// predicates compiled so far.
class CaseContext {
 public:
  explicit CaseContext(Limits limits);

  Environment& environment() { return env_; }
  const Kernel& kernel() const { return kernel_; }
  const CompiledPredicate& predicate(const std::string& name) const;
  void define(const Definition& d);
  std::size_t peak_states() const { return peak_; }

  /// Accepted tuples with every component <= bound.
  std::set<Tuple> decode(const std::string& name, std::uint64_t bound) const;

 private:
  Environment env_;
  Kernel kernel_;
  std::size_t peak_ = 0;
};

/// The full catalogue, ordered by id.
const std::vector<TheoremCase>& catalogue();

struct CorpusOptions {
  Limits limits;
  unsigned jobs = 1;
  bool skip_slow = false;
  std::vector<int> ids;  // empty: every case
};

CaseReport run_case(const TheoremCase& c, Limits limits = {});
std::vector<CaseReport> run_all(const CorpusOptions& options);
/// Same, over an explicit list of cases.
std::vector<CaseReport> run_cases(const std::vector<TheoremCase>& cases, const CorpusOptions& options);

/// Aligned table, one row per case, then a pass count. Without times the
/// time column shows "-".
std::string format_table(const std::vector<CaseReport>& reports, bool times = true);
/// `case_id status [witness]`, one line per case.
std::string format_lines(const std::vector<CaseReport>& reports);

/// Largest value accepted by a one-track automaton; nothing when the
/// language is empty or infinite.
std::optional<Natural> max_accepted(const Dfa& a);

/// Real root of 2x^3 - 12x^2 + 22x - 13.
long double critical_exponent_root();

}  // namespace tribo
