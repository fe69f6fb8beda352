#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "session.hpp"
#include "tribo/enumeration.hpp"

using namespace tribo;
using tribo::cli::Session;
using tribo::cli::SessionOptions;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run_script(const std::string& script, bool times = false) {
  std::ostringstream out, err;
  SessionOptions options;
  options.times = times;
  Session s(options, out, err);
  std::istringstream in(script);
  Result r;
  r.code = s.run(in, false);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "tribo_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

// Runs the installed binary and returns its exit status and stdout.
Result run_binary(const std::string& args) {
  const std::string command = std::string(TRIBO_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe);
  Result r;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof buffer, pipe)) r.out.append(buffer, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("empty script") {
    const Result r = run_script("");
    CHECK(r.code == cli::kOk);
    CHECK(r.out.empty());
    CHECK(run_script("# only a comment\n\n").code == cli::kOk);
  }

  TEST_CASE("square orders") {
    const Result r = run_script(
        "def sq := n > 0 & Ei Aj i <= j & j < i + n => T[j] = T[j + n]\n"
        "enumerate sq 30\n");
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("1,2,3,4,6,7,11,13,20,24") != std::string::npos);
    CHECK(r.out.find("with 4 states") != std::string::npos);
  }

  TEST_CASE("multi-line definitions and parameters") {
    const Result r = run_script(
        "def per(n, p) := Aj (j + p < n) \\\n"
        "  => T[j] = T[j + p]\n"
        "def yes := $per(5, 4)\n"
        "enumerate yes 0\n");
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("true") != std::string::npos);
  }

  TEST_CASE("engine errors stop a script") {
    const Result parse = run_script("def bad := x + (\nenumerate bad 3\n");
    CHECK(parse.code == cli::kEngineError);
    CHECK(parse.err.find('^') != std::string::npos);
    CHECK(parse.out.find("(none)") == std::string::npos);
    CHECK(run_script("frobnicate\n").code == cli::kEngineError);
    CHECK(run_script("def q := Q[n] = 0\n").code == cli::kEngineError);
    CHECK(run_script("load /nonexistent.nsd\n").code == cli::kEngineError);
  }

  TEST_CASE("output without times is reproducible") {
    const std::string script =
        "def ap := p >= 1 & En Ai i >= n => TR[i] = TR[i + p]\n"
        "def c := T[i] = T[i + 1]\n"
        "enumerate c 20\n";
    const Result a = run_script(script), b = run_script(script);
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
    CHECK(a.out.find("ms") == std::string::npos);
    CHECK(run_script(script, true).out.find("overall time") != std::string::npos);
  }

  TEST_CASE("counting and export") {
    const auto dot = scratch("sq.dot"), lin = scratch("occ.lin"), aut = scratch("sq.aut");
    const Result r = run_script(
        "def sq := n > 0 & Ei Aj i <= j & j < i + n => T[j] = T[j + n]\n"
        "def occ(n, i) := i < n & T[i] = 2\n"
        "count occ by n as twos\n"
        "enumerate twos 14\n"
        "export dot sq " + dot.string() + "\n"
        "export aut sq " + aut.string() + "\n"
        "export linrep twos " + lin.string() + "\n");
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("twos = occ by n") != std::string::npos);
    // Number of 2s among the first n letters of 0102010010201.
    CHECK(r.out.find("0,0,0,0,1,1,1,1,1,1,1,2,2,2") != std::string::npos);
    std::ifstream in(lin);
    std::stringstream text;
    text << in.rdbuf();
    const LinRep parsed = parse_linrep(text.str());
    CHECK(eval(parsed, natural(13)) == 2);
    CHECK(std::filesystem::file_size(dot) > 0);
    CHECK(std::filesystem::file_size(aut) > 0);
  }

  TEST_CASE("other numeration systems") {
    const Result r = run_script(
        "load " TRIBO_SOURCE_DIR "/core/data/base2.nsd\n"
        "seq X morphic 0->01,1->10\n"
        "def cube := n > 0 & Ei Aj i <= j & j < i + 2 * n => X[j] = X[j + n]\n"
        "enumerate cube 100\n");
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("bindings cleared") != std::string::npos);
    CHECK(r.out.find("(none)") != std::string::npos);
  }

  TEST_CASE("binary") {
    CHECK(run_binary("--no-times -c 'def x := n = 3' -c 'enumerate x 10'").out.find("3") != std::string::npos);
    const auto empty = scratch("empty.tribo");
    std::ofstream(empty).close();
    CHECK(run_binary(empty.string()).code == 0);
    CHECK(run_binary("-c 'def x := n = '").code == 2);
    const Result corpus = run_binary("--no-times corpus run 4 power-prefixes");
    CHECK(corpus.code == 0);
    CHECK(corpus.out.find("2/2 passed") != std::string::npos);
  }
}
