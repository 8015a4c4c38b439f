#include "plogit/cli.hpp"

int main(int argc, char** argv) { return plogit::cli::main_entry(argc, argv); }
