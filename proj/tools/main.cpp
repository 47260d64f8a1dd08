#include "hybridnet/cli.hpp"

int main(int argc, char** argv) { return hybridnet::cli::run_cli(argc, argv); }
