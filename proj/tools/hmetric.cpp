#include <iostream>

#include "hmeasure/cli.hpp"

int main(int argc, char** argv) {
    return hmeasure::cli::run(argc, argv, std::cout, std::cerr);
}
