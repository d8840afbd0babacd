#include <iostream>

#include "bounds/cli/commands.hpp"

int main(int argc, char** argv) { return bounds::cli::run_cli(argc, argv, std::cout, std::cerr); }
