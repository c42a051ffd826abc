#include "simspace/cli.hpp"

int main(int argc, char** argv) { return simspace::cli::run(argc, argv); }
