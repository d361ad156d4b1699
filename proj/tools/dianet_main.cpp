#include <iostream>
#include <string>
#include <vector>

#include "dianet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dianet::run_cli(args, std::cout, std::cerr);
}
