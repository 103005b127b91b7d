#include <iostream>

#include "whdet/cli.hpp"

int main(int argc, char** argv) {
  return whdet::cli::main_entry(argc, argv, std::cout, std::cerr);
}
