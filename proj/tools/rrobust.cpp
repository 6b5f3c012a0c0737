#include <iostream>

#include "rrobust/cli.hpp"

int main(int argc, char** argv) { return rrobust::cli::run_cli(argc, argv, std::cout, std::cerr); }
