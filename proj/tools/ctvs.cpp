#include <iostream>

#include "ctv/cli.hpp"

int main(int argc, char** argv) {
    return ctv::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
