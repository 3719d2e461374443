#include <iostream>
#include <vector>

#include "bcaret/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bcaret::run_cli(args, std::cout, std::cerr);
}
