#include <iostream>

#include "bclab/cli.hpp"

int main(int argc, char** argv) { return bclab::run_cli(argc, argv, std::cout, std::cerr); }
