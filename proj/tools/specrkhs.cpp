#include <iostream>

#include "specrkhs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return specrkhs::cli::run(args, std::cout, std::cerr);
}
