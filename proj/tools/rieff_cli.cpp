#include "rieff/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rieff::dispatch(argc, argv, std::cout, std::cerr); }
