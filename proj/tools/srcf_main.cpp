#include <iostream>
#include <string>
#include <vector>

#include "srcf/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return srcf::cli::run(args, std::cerr);
}
