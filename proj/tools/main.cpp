#include <iostream>

#include "deadend/cli.hpp"

int main(int argc, char** argv) { return deadend::cli::run(argc, argv, std::cout, std::cerr); }
