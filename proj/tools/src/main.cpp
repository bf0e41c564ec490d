#include "driftlab_cli/cli.hpp"

int main(int argc, char** argv) { return driftlab::cli::cli_main(argc, argv); }
