#include <iostream>
#include <string>
#include <vector>

#include "mobility/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mobility::cli::dispatch(args, std::cout, std::cerr);
}
