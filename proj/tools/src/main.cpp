#include <iostream>
#include <string>
#include <vector>

#include "ssalt/cli.hpp"

int main(int argc, char** argv) {
  return ssalt::cli::run(std::vector<std::string>(argv, argv + argc), std::cout,
                         std::cerr);
}
