#include "symrmt/cli.hpp"

int main(int argc, char** argv) { return symrmt::cli::main(argc, argv); }
