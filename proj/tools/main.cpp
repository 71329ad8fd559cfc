#include <iostream>

#include "ecarm/cli.hpp"

int main(int argc, char** argv) {
  return ecarm::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
