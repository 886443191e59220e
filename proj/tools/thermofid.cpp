#include <iostream>

#include "thermofid/cli/commands.hpp"

int main(int argc, char** argv) {
  return thermofid::cli::run_cli(argc, argv, std::cout, std::cerr);
}
