#include <iostream>

#include "thinfilm/cli.hpp"

int main(int argc, char** argv) { return thinfilm::cli_main(argc, argv, std::cout, std::cerr); }
