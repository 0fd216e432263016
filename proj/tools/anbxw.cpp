#include <unistd.h>

#include <iostream>

#include "anbx/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  anbx::cli::CliEnv env;
  env.terminal = ::isatty(STDOUT_FILENO) == 1;
  return anbx::cli::run_cli(args, std::cout, std::cerr, env);
}
