#include <iostream>

#include "kcomm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kcomm::run_cli(args, std::cout, std::cerr);
}
