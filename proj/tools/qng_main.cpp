// qng_main.cpp -- command-line entry point (see qng::cli for the
// implementation of the subcommands).
#include "qng/cli.hpp"

int main(int argc, char** argv) { return qng::cli::run(argc, argv); }
