#include "session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "tribo/corpus.hpp"
#include "tribo/word.hpp"

namespace tribo::cli {

namespace {

// Prefix length used to learn a DFAO from a morphism and to verify it.
constexpr std::size_t kLearnPrefix = std::size_t{1} << 17;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool valid_name(const std::string& s) {
  static const std::regex name(R"([A-Za-z_][A-Za-z0-9_]*)");
  return std::regex_match(s, name);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path + "'");
}

std::string tuple_text(const std::vector<Natural>& t) {
  if (t.size() == 1) return t[0].get_str();
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i].get_str();
  return s + ")";
}

std::size_t parse_count(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s[0] == '-')
    throw std::invalid_argument(std::string(what) + " must be a non-negative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

Session::Session(SessionOptions options, std::ostream& out, std::ostream& err)
    : options_(options), out_(out), err_(err) {
  env_.limits = options_.limits;
  use_tribonacci();
}

void Session::use_tribonacci() {
  env_.numeration = &tribonacci_system();
  kernel_ = std::make_unique<Kernel>(*env_.numeration, options_.limits);
  env_.sequences.clear();
  env_.predicates.clear();
  linreps_.clear();
  const Dfao& t = tribonacci_dfao();
  env_.sequences.emplace("T", t);
  env_.sequences.emplace("TR", t);
  env_.sequences.emplace("B", dfao_map(t, [](int a) { return std::min(a, 1); }));
}

void Session::use_numeration(NumerationSystem ns) {
  systems_.push_back(std::move(ns));
  env_.numeration = &systems_.back();
  kernel_ = std::make_unique<Kernel>(*env_.numeration, options_.limits);
  env_.sequences.clear();
  env_.predicates.clear();
  linreps_.clear();
}

int Session::execute(std::string_view line) {
  line = trim(line);
  if (line.empty() || line.front() == '#') return kOk;
  const auto space = line.find_first_of(" \t");
  const std::string command(line.substr(0, space));
  const std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
  try {
    return dispatch(command, rest);
  } catch (const ParseError& e) {
    err_ << "parse error: " << e.what() << '\n';
    if (command == "def") {
      // Point at the offending character of the query.
      const auto assign = rest.find(":=");
      if (assign != std::string_view::npos) {
        const std::string_view query = trim(rest.substr(assign + 2));
        err_ << "  " << query << "\n  " << std::string(std::min(e.position(), query.size()), ' ') << "^\n";
      }
    }
  } catch (const CompileError& e) {
    err_ << (e.resource() ? "resource limit: " : "error: ") << e.what() << '\n'
         << "  in subexpression: " << e.subexpression() << '\n';
  } catch (const ResourceError& e) {
    err_ << "resource limit: " << e.what() << " (" << e.states() << " states)\n";
  } catch (const FormatError& e) {
    err_ << "format error: " << e.what() << '\n';
  } catch (const ClosureError& e) {
    err_ << "numeration error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
  }
  return kEngineError;
}

int Session::dispatch(const std::string& command, std::string_view rest) {
  if (command == "def") return define(rest);
  if (command == "load") return load(rest);
  if (command == "seq") return sequence(rest);
  if (command == "export") return export_to(rest);
  if (command == "enumerate") return enumerate(rest);
  if (command == "corpus") return corpus(rest);
  if (command == "count") return count(rest);
  if (command == "help") return help();
  if (command == "quit" || command == "exit") {
    quit_ = true;
    return kOk;
  }
  throw std::invalid_argument("unknown command '" + command + "' (try help)");
}

int Session::define(std::string_view rest) {
  // def name := query   |   def name(a, b) := query
  static const std::regex head(R"(^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s*$)");
  const auto assign = rest.find(":=");
  if (assign == std::string_view::npos) throw std::invalid_argument("usage: def <name> := <query>");
  const std::string lhs(rest.substr(0, assign));
  std::smatch m;
  if (!std::regex_match(lhs, m, head)) throw std::invalid_argument("bad predicate name '" + lhs + "'");
  std::string_view query = trim(rest.substr(assign + 2));
  if (query.size() >= 2 && query.front() == '"' && query.back() == '"') query = query.substr(1, query.size() - 2);
  const std::string name = m[1];
  if (env_.sequences.count(name)) throw std::invalid_argument("'" + name + "' is a sequence");

  CompiledPredicate p;
  if (m[2].matched) {
    std::vector<std::string> params;
    std::string list = m[2];
    std::replace(list.begin(), list.end(), ',', ' ');
    for (const auto& w : words(list)) {
      if (!valid_name(w)) throw std::invalid_argument("bad parameter '" + w + "'");
      params.push_back(w);
    }
    p = compile(query, env_, params);
  } else {
    p = compile(query, env_);
  }
  out_ << format_log(p, options_.times);
  env_.predicates[name] = std::move(p);
  linreps_.erase(name);
  return kOk;
}

int Session::load(std::string_view rest) {
  const auto args = words(rest);
  if (args.size() != 1) throw std::invalid_argument("usage: load <file.nsd>");
  NumerationSystem ns = load_numeration(read_file(args[0]));
  out_ << "numeration " << ns.name() << " loaded; bindings cleared\n";
  use_numeration(std::move(ns));
  return kOk;
}

int Session::sequence(std::string_view rest) {
  // seq <name> morphic <rules>[; start=a][; coding=c0,c1,...]
  const auto args = words(rest);
  if (args.size() < 3 || args[1] != "morphic") throw std::invalid_argument("usage: seq <name> morphic <spec>");
  const std::string& name = args[0];
  if (!valid_name(name)) throw std::invalid_argument("bad sequence name '" + name + "'");
  const auto at = rest.find("morphic");
  const Morphism m = parse_morphism(trim(rest.substr(at + 7)));
  const Letters prefix = morphic_prefix(m, kLearnPrefix);
  Dfao d = learn_dfao(*env_.numeration, prefix, kLearnPrefix);
  out_ << name << ": " << d.num_states() << "-state automaton, checked on the first " << kLearnPrefix
       << " letters\n";
  env_.sequences.insert_or_assign(name, std::move(d));
  env_.predicates.erase(name);
  return kOk;
}

int Session::export_to(std::string_view rest) {
  const auto args = words(rest);
  if (args.size() != 3) throw std::invalid_argument("usage: export dot|aut|linrep <name> <path>");
  const std::string& format = args[0];
  const std::string& name = args[1];
  const std::string& path = args[2];
  std::string text;
  if (format == "linrep") {
    auto it = linreps_.find(name);
    if (it == linreps_.end()) throw std::invalid_argument("no linear representation named '" + name + "' (use count)");
    text = serialize(it->second);
  } else if (format == "dot" || format == "aut") {
    if (auto p = env_.predicates.find(name); p != env_.predicates.end()) {
      text = format == "dot" ? to_dot(p->second.dfa, name) : serialize(p->second.dfa);
    } else if (auto s = env_.sequences.find(name); s != env_.sequences.end() && format == "dot") {
      text = to_dot(s->second, name);
    } else {
      throw std::invalid_argument("no predicate named '" + name + "'");
    }
  } else {
    throw std::invalid_argument("unknown export format '" + format + "'");
  }
  write_file(path, text);
  out_ << "wrote " << path << '\n';
  return kOk;
}

int Session::enumerate(std::string_view rest) {
  const auto args = words(rest);
  if (args.size() != 2) throw std::invalid_argument("usage: enumerate <name> <limit>");
  const std::size_t limit = parse_count(args[1], "limit");
  if (auto p = env_.predicates.find(args[0]); p != env_.predicates.end()) {
    const Dfa& a = p->second.dfa;
    if (a.arity() == 0) {
      out_ << (a.truth() ? "true" : "false") << '\n';
      return kOk;
    }
    const auto tuples = kernel_->enumerate(a, limit);
    std::string line;
    for (std::size_t i = 0; i < tuples.size(); ++i) line += (i ? "," : "") + tuple_text(tuples[i]);
    if (a.arity() > 1) {
      std::string head;
      for (std::size_t i = 0; i < p->second.free_tracks.size(); ++i)
        head += (i ? "," : "") + p->second.free_tracks[i];
      out_ << '(' << head << "): ";
    }
    out_ << (tuples.empty() ? "(none)" : line) << '\n';
    return kOk;
  }
  if (auto r = linreps_.find(args[0]); r != linreps_.end()) {
    const auto values = eval_all(r->second, limit, *env_.numeration);
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) line += (i ? "," : "") + to_string(values[i]);
    out_ << line << '\n';
    return kOk;
  }
  throw std::invalid_argument("no predicate named '" + args[0] + "'");
}

int Session::corpus(std::string_view rest) {
  auto args = words(rest);
  if (args.empty() || args[0] != "run") throw std::invalid_argument("usage: corpus run [id...]");
  CorpusOptions o;
  o.limits = options_.limits;
  o.jobs = options_.jobs;
  o.skip_slow = options_.skip_slow;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const auto& cases = catalogue();
    auto it = std::find_if(cases.begin(), cases.end(), [&](const TheoremCase& c) {
      return c.slug == args[i] || std::to_string(c.id) == args[i];
    });
    if (it == cases.end()) throw std::invalid_argument("no corpus case '" + args[i] + "'");
    o.ids.push_back(it->id);
  }
  const auto reports = run_all(o);
  out_ << format_table(reports, options_.times) << std::flush;
  bool error = false, failed = false;
  for (const auto& r : reports) {
    error = error || r.status == CaseStatus::Error;
    failed = failed || r.status == CaseStatus::Fail;
  }
  return error ? kEngineError : failed ? kCaseFailure : kOk;
}

int Session::count(std::string_view rest) {
  const auto args = words(rest);
  if (!(args.size() == 3 || (args.size() == 5 && args[3] == "as")) || args[1] != "by")
    throw std::invalid_argument("usage: count <name> by <track> [as <alias>]");
  const std::string& alias = args.size() == 5 ? args[4] : args[0];
  if (!valid_name(alias)) throw std::invalid_argument("bad name '" + alias + "'");
  auto p = env_.predicates.find(args[0]);
  if (p == env_.predicates.end()) throw std::invalid_argument("no predicate named '" + args[0] + "'");
  const LinRep raw = linrep_from_dfa(p->second.dfa, args[2]);
  LinRep r = minimize(raw);
  out_ << alias << " = " << args[0] << " by " << args[2] << ": rank " << r.rank() << " (" << raw.rank()
       << " before minimization)\n";
  linreps_.insert_or_assign(alias, std::move(r));
  return kOk;
}

int Session::help() {
  out_ << "def <name> := <query>          compile a predicate and print its log\n"
          "def <name>(a, b) := <query>    same, with tracks in the given order\n"
          "load <file.nsd>                switch numeration system\n"
          "seq <name> morphic <spec>      bind a morphic word, e.g. 0->01,1->02,2->0\n"
          "export dot|aut|linrep <name> <path>\n"
          "enumerate <name> <limit>       first accepted tuples or sequence values\n"
          "count <name> by <track> [as <alias>]\n"
          "                               linear representation counting the other tracks\n"
          "corpus run [id...]             run the theorem corpus\n"
          "quit\n";
  return kOk;
}

int Session::run(std::istream& in, bool interactive) {
  int worst = kOk;
  std::string line, pending;
  while (!quit_) {
    if (interactive) out_ << (pending.empty() ? "> " : "... ") << std::flush;
    if (!std::getline(in, line)) break;
    // A trailing backslash continues the command on the next line.
    if (!line.empty() && line.back() == '\\') {
      pending += line.substr(0, line.size() - 1) + ' ';
      continue;
    }
    const int code = execute(pending + line);
    pending.clear();
    worst = std::max(worst, code);
    if (code == kEngineError && !interactive) break;
  }
  if (!pending.empty() && !quit_) worst = std::max(worst, execute(pending));
  return worst;
}

}  // namespace tribo::cli
