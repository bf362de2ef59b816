#include <iostream>

#include "gridnls/cli.hpp"

int main(int argc, char** argv) { return gridnls::cli_main(argc, argv, std::cout, std::cerr); }
