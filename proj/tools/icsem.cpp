#include <iostream>

#include "icsem/cli.hpp"

int main(int argc, char** argv) { return icsem::cli::run(argc, argv, std::cout, std::cerr); }
