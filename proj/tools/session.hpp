#pragma once

#include <iosfwd>
#include <list>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "tribo/automata.hpp"
#include "tribo/enumeration.hpp"
#include "tribo/logic.hpp"

namespace tribo::cli {

enum ExitCode : int { kOk = 0, kCaseFailure = 1, kEngineError = 2 };

struct SessionOptions {
  Limits limits;
  unsigned jobs = 1;
  bool times = true;
  bool skip_slow = false;
};

/// Interpreter state shared by scripts and the REPL. Names live in two
/// spaces: predicates (and sequences) from `def`/`seq`, linear
/// representations from `count`.
class Session {
 public:
  Session(SessionOptions options, std::ostream& out, std::ostream& err);

  /// Switches the numeration system. Bindings made under the previous system
  /// are dropped; T, TR and B are bound only under the built-in one.
  void use_numeration(NumerationSystem ns);
  void use_tribonacci();

  /// Runs one command line. Returns kOk, kCaseFailure (a corpus case failed)
  /// or kEngineError, after reporting the problem on the error stream.
  int execute(std::string_view line);

  /// Runs commands until end of input or `quit`. A script stops at the first
  /// engine error; the REPL keeps going. Returns the worst exit code seen.
  int run(std::istream& in, bool interactive);

  bool quit_requested() const { return quit_; }
  const Environment& environment() const { return env_; }
  const std::map<std::string, LinRep>& linreps() const { return linreps_; }

 private:
  int dispatch(const std::string& command, std::string_view rest);
  int define(std::string_view rest);
  int load(std::string_view rest);
  int sequence(std::string_view rest);
  int export_to(std::string_view rest);
  int enumerate(std::string_view rest);
  int corpus(std::string_view rest);
  int count(std::string_view rest);
  int help();

  SessionOptions options_;
  std::ostream& out_;
  std::ostream& err_;
  std::list<NumerationSystem> systems_;  // stable addresses for env_.numeration
  Environment env_;
  std::unique_ptr<Kernel> kernel_;
  std::map<std::string, LinRep> linreps_;
  bool quit_ = false;
};

}  // namespace tribo::cli
