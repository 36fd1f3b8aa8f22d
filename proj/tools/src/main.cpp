#include <iostream>
#include <string>
#include <vector>

#include "kernelkit_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kk::cli::dispatch(args, std::cout);
}
