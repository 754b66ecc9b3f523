#include "fwsn/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fwsn::cli::run(argc, argv, std::cout, std::cerr); }
