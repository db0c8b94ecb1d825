#include <iostream>

#include "etr/cli.hpp"

int main(int argc, char** argv) {
  return etr::run_cli(argc, argv, std::cout, std::cerr);
}
