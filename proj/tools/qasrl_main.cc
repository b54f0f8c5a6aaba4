#include <iostream>
#include <string>
#include <vector>

#include "qasrl/cli.h"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qasrl::run(args, std::cout, std::cerr);
}
