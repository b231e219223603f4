#include <iostream>

#include "pan_cli/commands.hpp"

int main(int argc, char** argv) { return pan::cli::run(argc, argv, std::cout, std::cerr); }
