#include <iostream>

#include "gcub/cli.hpp"

int main(int argc, char** argv) { return gcub::cli::main_entry(argc, argv, std::cout, std::cerr); }
