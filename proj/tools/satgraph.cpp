#include "sat/cli/commands.hpp"

int main(int argc, char** argv) { return sat::cli::run_cli(argc, argv); }
