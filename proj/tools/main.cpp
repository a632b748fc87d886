#include "ellzeros/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return ellzeros::run_cli(args, std::cout, std::cerr);
}
