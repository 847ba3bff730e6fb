#include <iostream>

#include "selbv/cli.hpp"

int main(int argc, char** argv) { return selbv::cli::run(argc, argv, std::cout, std::cerr); }
