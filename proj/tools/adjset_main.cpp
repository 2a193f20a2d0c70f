#include <iostream>

#include "adjset/io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return adjset::run_cli(args, std::cout, std::cerr);
}
