#include "cli.hpp"

int main(int argc, char** argv) { return plumbing::cli::run(argc, argv, std::cout, std::cerr); }
