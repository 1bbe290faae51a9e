#include <iostream>

#include "cex/cli.hpp"

int main(int argc, char** argv) { return cex::run_cli(argc, argv, std::cout, std::cerr); }
