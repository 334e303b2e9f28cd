#include "cli.hpp"

int main(int argc, char** argv) { return bvk::cli::run_cli(argc, argv); }
