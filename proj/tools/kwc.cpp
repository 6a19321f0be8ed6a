#include <iostream>

#include "kwc/cli.hpp"

int main(int argc, char** argv) { return kwc::run_cli(argc, argv, std::cout, std::cerr); }
