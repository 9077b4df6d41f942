#include "confluent/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return confluent::run_cli(args, std::cout, std::cerr);
}
