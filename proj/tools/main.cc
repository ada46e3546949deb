#include "cli.hh"

#include <iostream>

auto main(int argc, char * argv[]) -> int
{
    return homforge::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
