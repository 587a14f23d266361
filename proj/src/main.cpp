#include <iostream>

#include "scalelab/cli.hpp"

int main(int argc, char** argv) { return scalelab::run_cli(argc, argv, std::cout, std::cerr); }
