#include "triwork/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return triwork::run_cli(argc, argv, std::cout, std::cerr); }
