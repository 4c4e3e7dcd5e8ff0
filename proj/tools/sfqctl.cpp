#include <iostream>
#include <string>
#include <vector>

#include "sfq/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sfq::cli::run(args, std::cout, std::cerr);
}
