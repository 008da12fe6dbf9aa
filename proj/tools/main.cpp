#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return escape_lab::cli::dispatch(argc, argv, std::cout, std::cerr); }
