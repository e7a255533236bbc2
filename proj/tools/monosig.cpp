#include <iostream>

#include "monosig/cli.hpp"

int main(int argc, char** argv)
{
    return monosig::cli::run(argc, argv, std::cout, std::cerr);
}
