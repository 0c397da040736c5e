#include <iostream>

#include "demuskin/cli/app.hpp"

int main(int argc, char** argv) { return demuskin::cli::run_app(argc, argv, std::cout, std::cerr); }
