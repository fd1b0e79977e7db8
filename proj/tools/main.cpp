#include <iostream>

#include "signgram/cli.hpp"

int main(int argc, char** argv) { return signgram::cli::run(argc, argv, std::cout, std::cerr); }
