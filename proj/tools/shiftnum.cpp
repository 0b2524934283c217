#include <iostream>

#include "shiftnum/cli.hpp"

int main(int argc, char** argv) { return shiftnum::cli::run(argc, argv, std::cout, std::cerr); }
