#include <iostream>

#include "bilin/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bilin::cli::run(args, std::cout, std::cerr);
}
