#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return podvs::run_cli(argc, argv, std::cout, std::cerr); }
