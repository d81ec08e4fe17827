#include "weldlab/cli.hpp"

int main(int argc, char** argv) { return weldlab::cli::run(argc, argv); }
