#include "tracereg/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
    return tracereg::cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
