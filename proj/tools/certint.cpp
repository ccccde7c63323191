#include <iostream>
#include <string>
#include <vector>

#include "certint/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv, argv + argc);
    return certint::cli::run(args, std::cout, std::cerr);
}
