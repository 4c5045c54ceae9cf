#include <iostream>

#include "paircredit/cli/commands.hpp"

int main(int argc, char** argv) { return paircredit::cli::run(argc, argv, std::cout, std::cerr); }
