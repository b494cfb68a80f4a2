#include <iostream>

#include "heis/cli.hpp"

int main(int argc, char** argv) { return heis::run_cli(argc, argv, std::cout, std::cerr); }
