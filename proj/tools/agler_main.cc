#include <iostream>
#include <string>
#include <vector>

#include "agler/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return agler::cli::Run(args, std::cout, std::cerr);
}
