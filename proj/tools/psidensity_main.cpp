#include <iostream>

#include "psidensity/cli.hpp"

int main(int argc, char** argv) {
  return psidensity::run_cli(argc, argv, std::cout, std::cerr);
}
