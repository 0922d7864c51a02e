#include <jetad/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return jetad::cli::run(argc, argv, std::cout, std::cerr); }
