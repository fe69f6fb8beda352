#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure for first-order queries about Tribonacci-automatic words"};
  double budget = 5e6;
  unsigned jobs = 1;
  bool no_times = false;
  bool skip_slow = false;
  std::string numeration;
  std::vector<std::string> commands;
  std::vector<std::string> positional;
  app.add_option("--budget", budget, "Largest automaton any step may build (states)")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs,-j", jobs, "Corpus cases to run in parallel")->check(CLI::Range(1U, 256U));
  app.add_flag("--no-times", no_times, "Omit timings, for reproducible output");
  app.add_flag("--skip-slow", skip_slow, "Leave long-running corpus cases out");
  app.add_option("--numeration", numeration, "Numeration system (.nsd) to start with")
      ->check(CLI::ExistingFile);
  app.add_option("-c,--command", commands, "Run a command; may be repeated");
  app.add_option("args", positional, "A script file, or a single command such as: corpus run");
  CLI11_PARSE(app, argc, argv);

  tribo::cli::SessionOptions options;
  options.limits.max_states = static_cast<std::size_t>(budget);
  options.jobs = jobs;
  options.times = !no_times;
  options.skip_slow = skip_slow;

  try {
    tribo::cli::Session session(options, std::cout, std::cerr);
    if (!numeration.empty()) {
      std::ifstream in(numeration);
      std::ostringstream text;
      text << in.rdbuf();
      session.use_numeration(tribo::load_numeration(text.str()));
    }

    if (!commands.empty() || (!positional.empty() && !(positional.size() == 1 &&
                                                        std::filesystem::is_regular_file(positional[0])))) {
      std::string joined;
      for (const auto& p : positional) joined += (joined.empty() ? "" : " ") + p;
      if (!joined.empty()) commands.push_back(joined);
      int worst = tribo::cli::kOk;
      for (const auto& c : commands) {
        const int code = session.execute(c);
        worst = std::max(worst, code);
        if (code == tribo::cli::kEngineError || session.quit_requested()) break;
      }
      return worst;
    }
    if (!positional.empty()) {
      std::ifstream script(positional[0]);
      return session.run(script, false);
    }
    return session.run(std::cin, isatty(STDIN_FILENO) != 0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tribo::cli::kEngineError;
  }
}
