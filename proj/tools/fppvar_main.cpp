#include <iostream>

#include "fppvar/cli.hpp"

int main(int argc, char** argv)
{
  return fppvar::run_cli(argc, argv, std::cout, std::cerr);
}
