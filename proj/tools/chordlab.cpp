#include <iostream>

#include "chordlab/cli.hpp"

int main(int argc, char** argv) { return chordlab::runCli(argc, argv, std::cout, std::cerr); }
