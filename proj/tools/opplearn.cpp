#include <iostream>
#include <string>
#include <vector>

#include "opplearn/cli.hpp"

int main(int argc, char** argv) {
  return opplearn::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
