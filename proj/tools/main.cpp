#include "qcqkd/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return qcqkd::cli::run(argc, argv, std::cout, std::cerr);
}
