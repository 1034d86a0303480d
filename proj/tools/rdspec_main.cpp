#include <iostream>

#include "rdspec/cli.hpp"

int main(int argc, char** argv) { return rdspec::cli_main(argc, argv, std::cout, std::cerr); }
