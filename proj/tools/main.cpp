#include <iostream>
#include <string>
#include <vector>

#include "causalnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return causalnet::run_cli(args, std::cout, std::cerr);
}
