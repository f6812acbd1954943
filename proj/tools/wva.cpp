#include <iostream>
#include <string>
#include <vector>

#include "wva/config.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return wva::cli_main(args, std::cout, std::cerr);
}
