#include "srb/cli.hpp"

int main(int argc, char** argv) { return srb::cli::run_cli(argc, argv); }
