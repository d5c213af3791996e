#include <iostream>

#include "sudoku/cli.hpp"

int main(int argc, char** argv) {
    return sudoku::cli::run(argc, argv, std::cout, std::cerr);
}
