#include <iostream>

#include "ufckit/cli.hpp"

int main(int argc, char** argv) { return ufckit::run_cli(argc, argv, std::cout, std::cerr); }
