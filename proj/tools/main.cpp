#include <iostream>

#include "sbgm/commands.hpp"

int main(int argc, char** argv) { return sbgm::cli::run_cli(argc, argv, std::cout, std::cerr); }
