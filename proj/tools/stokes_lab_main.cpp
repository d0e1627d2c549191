#include <iostream>
#include <string>
#include <vector>

#include "stokes_lab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return stokes_lab::cli::run_cli(args, std::cout, std::cerr);
}
