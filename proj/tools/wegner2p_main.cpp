#include <iostream>
#include <string>
#include <vector>

#include "wegner2p/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return wegner2p::cli::parse_and_dispatch(args, std::cout, std::cerr);
}
