#include "mmcov/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return mmcov::cli::run(argc, argv, std::cout, std::cerr);
}
