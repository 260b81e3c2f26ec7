#include <iostream>

#include "raagsc/cli.hpp"

int main(int argc, char** argv) { return raagsc::cli::run(argc, argv, std::cout, std::cerr); }
