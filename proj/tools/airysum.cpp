#include <iostream>

#include "airysum/cli.hpp"

int main(int argc, char** argv) { return airysum::run_cli(argc, argv, std::cout, std::cerr); }
