#include <iostream>

#include "idq/cli.hpp"

int main(int argc, char** argv) { return idq::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
