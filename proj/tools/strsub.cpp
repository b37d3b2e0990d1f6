#include <iostream>

#include "strsub/cli/commands.hpp"

int main(int argc, char** argv) {
  return strsub::cli::run_cli(argc, argv, std::cout, std::cerr);
}
