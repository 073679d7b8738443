#include <iostream>
#include <string>
#include <vector>

#include "sympfact/cli.hpp"

int main(int argc, char** argv) {
  return sympfact::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
