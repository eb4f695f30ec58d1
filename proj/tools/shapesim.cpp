#include <iostream>

#include "shapesim/cli/run.hpp"

int main(int argc, char** argv) { return shapesim::cli::main_entry(argc, argv, std::cout, std::cerr); }
