#include <iostream>

#include "symreg/cli/app.hpp"

int main(int argc, char** argv) { return symreg::cli::run(argc, argv, std::cout, std::cerr); }
