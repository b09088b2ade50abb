#include <iostream>
#include <string>
#include <vector>

#include "holant/cli.hpp"

int main(int argc, char** argv) {
  return holant::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
