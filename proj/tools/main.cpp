#include <iostream>
#include <string>
#include <vector>

#include "spacefill/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv + 1, argv + argc);
  return spacefill::cli::run(args, std::cin, std::cout, std::cerr);
}
