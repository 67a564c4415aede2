#include <iostream>

#include "niekf/cli.hpp"

int main(int argc, char** argv) { return niekf::dispatch(argc, argv, std::cout, std::cerr); }
