#include <iostream>

#include "sparse_pr_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sparse_pr::cli::dispatch(args, std::cout, std::cerr);
}
