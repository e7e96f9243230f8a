#include "masp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return masp::cli::run(argc, argv, std::cout, std::cerr); }
