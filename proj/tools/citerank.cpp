#include <citerank/cli.hpp>

#include <iostream>

int main(int argc, char **argv) {
    std::ios::sync_with_stdio(false);
    return citerank::cli::main(argc, argv, std::cout, std::cerr);
}
