#include <unistd.h>

#include <iostream>

#include "colprob/app.hpp"

int main(int argc, char** argv) {
  return colprob::cli::run_cli(argc, argv, std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0);
}
