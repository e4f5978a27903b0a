#include <iostream>
#include <string>
#include <vector>

#include "prds/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return prds::run_cli(args, std::cout, std::cerr);
}
