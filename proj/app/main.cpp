#include <iostream>

#include "lp3/cli.hpp"

int main(int argc, char** argv) {
  return lp3::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cin, std::cout, std::cerr);
}
