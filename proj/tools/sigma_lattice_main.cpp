#include "cli_app.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return sigma_lattice::cli::run(argc, argv, std::cout, std::cerr);
}
