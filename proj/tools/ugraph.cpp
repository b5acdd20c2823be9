#include "ugraph/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ugraph::cli::run(argc, argv, std::cout, std::cerr); }
