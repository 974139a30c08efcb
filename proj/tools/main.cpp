#include <iostream>

#include "cli.hpp"
#include "flmob/config.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flmob::cli::run(args, flmob::flmob_environment(), std::cout, std::cerr);
}
