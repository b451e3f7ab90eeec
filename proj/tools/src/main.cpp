#include "dpg/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return dpg::cli::run(argc, argv, std::cout, std::cerr); }
