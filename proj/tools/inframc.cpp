#include <iostream>
#include <string>
#include <vector>

#include "inframc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return inframc::run_command(args, std::cout, std::cerr);
}
