#include <iostream>

#include "fpp/cli.hpp"

int main(int argc, char** argv) { return fpp::main_entry(argc, argv, std::cout, std::cerr); }
