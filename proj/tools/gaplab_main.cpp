#include "gaplab/cli.hpp"

int main(int argc, char** argv) { return gaplab::cli::main_entry(argc, argv); }
