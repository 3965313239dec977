#include "smacollide/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return smacollide::cli_main(argc, argv, std::cout, std::cerr); }
