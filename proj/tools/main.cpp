#include <iostream>

#include "robcons/cli.hpp"

int main(int argc, char** argv) {
  return robcons::run_cli(argc, argv, std::cout, std::cerr);
}
