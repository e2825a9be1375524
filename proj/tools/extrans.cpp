#include <iostream>

#include "extrans/cli.hpp"

int main(int argc, char** argv)
{
    return extrans::cli::runCli(argc, argv, std::cout, std::cerr);
}
