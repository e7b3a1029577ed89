#include <iostream>

#include "grushin/cli.hpp"

int main(int argc, char** argv) { return grushin::run_cli(argc, argv, std::cout, std::cerr); }
