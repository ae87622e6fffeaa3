#include "lab.hpp"

#include <iostream>

int main(int argc, char** argv) { return mahler::lab::run(argc, argv, std::cout, std::cerr); }
