#include <fstream>
#include <iostream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>

#include "osdf/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"OSDF policy-based SDN controller and network simulator"};
  std::string script;
  std::string command;
  app.add_option("script", script, "command script to run in batch mode")
      ->check(CLI::ExistingFile);
  app.add_option("-c,--command", command, "execute a single command and exit");
  CLI11_PARSE(app, argc, argv);

  osdf::Session session(std::cout);
  if (!command.empty()) return session.execute(command) ? 0 : 1;
  if (!script.empty()) {
    std::ifstream in(script);
    if (!in) {
      std::cerr << "cannot open script '" << script << "'\n";
      return 1;
    }
    return session.run_script(in, /*stop_on_error=*/true) ? 0 : 1;
  }
  bool tty = isatty(fileno(stdin));
  if (tty) std::cout << "osdf> " << std::flush;
  for (std::string line; std::getline(std::cin, line);) {
    session.execute(line);
    if (tty) std::cout << "osdf> " << std::flush;
  }
  if (tty) std::cout << "\n";
  return 0;
}
