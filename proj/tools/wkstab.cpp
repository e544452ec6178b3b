#include <iostream>

#include "wkstab/cli.hpp"

int main(int argc, char** argv) { return wkstab::cli::run(argc, argv, std::cout, std::cerr); }
