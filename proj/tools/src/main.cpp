#include <iostream>

#include "gedge_cli/run.hpp"

int main(int argc, char** argv) {
  return gedge::cli::main_entry(argc, argv, std::cout, std::cerr);
}
