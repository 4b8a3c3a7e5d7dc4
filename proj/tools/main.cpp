#include <iostream>
#include <string>
#include <vector>

#include "fxt_mvi/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fxt_mvi::cli::parse_and_dispatch(args, std::cout, std::cerr);
}
