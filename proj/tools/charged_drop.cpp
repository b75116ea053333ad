#include <iostream>
#include <string>
#include <vector>

#include "charged_drop/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return charged_drop::cli::run(args, std::cout, std::cerr);
}
