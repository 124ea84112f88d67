#include <iostream>

#include "fusionframe/cli.hpp"

int main(int argc, char** argv)
{
    return fusionframe::cli::run(argc, argv, std::cout, std::cerr);
}
