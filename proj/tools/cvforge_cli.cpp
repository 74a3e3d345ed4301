#include <iostream>

#include "cvforge/commands.hpp"

int main(int argc, char** argv) { return cvforge::run_cli(argc, argv, std::cout, std::cerr); }
