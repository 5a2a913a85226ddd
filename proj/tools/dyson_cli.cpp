#include "commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return dyson::cli::run_cli(argc, argv, std::cout, std::cerr); }
