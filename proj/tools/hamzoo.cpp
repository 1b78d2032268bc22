#include <iostream>

#include "hamzoo/cli.hpp"

int main(int argc, char** argv) {
  return hamzoo::run_cli(argc, argv, std::cout, std::cerr);
}
