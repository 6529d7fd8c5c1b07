#include <iostream>

#include "rician_cli/cli.hpp"

int main(int argc, char** argv) { return rician::cli::run_main(argc, argv, std::cerr); }
