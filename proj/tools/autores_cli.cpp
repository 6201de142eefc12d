#include <iostream>

#include "autores/cli.hpp"

int main(int argc, char** argv) { return autores::run_cli(argc, argv, std::cout, std::cerr); }
