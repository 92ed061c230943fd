#include <iostream>

#include "ridgeprox/cli.hpp"

int main(int argc, char** argv) { return ridgeprox::cli::run(argc, argv, std::cout, std::cerr); }
