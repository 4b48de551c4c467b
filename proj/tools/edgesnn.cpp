#include "edgesnn/cli/commands.hpp"

int main(int argc, char** argv) { return edgesnn::cli::run_cli(argc, argv); }
