#include <iostream>

#include "vdlab/cli.hpp"

int main(int argc, char** argv) { return vdlab::cli::run(argc, argv, std::cout, std::cerr); }
