#include <iostream>

#include "swipt/cli.hpp"

int main(int argc, char** argv) {
  return swipt::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
