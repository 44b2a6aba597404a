#include <iostream>
#include <string>
#include <vector>

#include "bolab/cli.hpp"

int main(int argc, char** argv) {
  return bolab::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
