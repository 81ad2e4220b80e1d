#include <iostream>

#include "nidsbench/cli.hpp"

int main(int argc, char** argv) { return nidsbench::run_command(argc, argv, std::cout, std::cerr); }
