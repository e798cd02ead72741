#include <iostream>

#include "ieoe/io/cli.h"

int main(int argc, char** argv) {
  return ieoe::io::RunCli(argc, argv, std::cout, std::cerr);
}
