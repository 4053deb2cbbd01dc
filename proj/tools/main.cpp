#include "rpcoh/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rpcoh::run_cli(argc, argv, std::cout, std::cerr); }
