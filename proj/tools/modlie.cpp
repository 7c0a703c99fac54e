#include <iostream>

#include "modlie/cli.hpp"

int main(int argc, char** argv) { return modlie::cli::run(argc, argv, std::cout, std::cerr); }
