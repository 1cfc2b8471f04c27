#include <iostream>

#include "mirror/cli.hpp"

int main(int argc, char** argv) { return mirror::cli::main_entry(argc, argv, std::cout, std::cerr); }
