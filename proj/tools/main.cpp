#include <iostream>

#include "tri/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tri::cli::run(args, std::cout, std::cerr);
}
