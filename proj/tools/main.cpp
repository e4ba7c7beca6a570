#include "otai/cli.hpp"

int main(int argc, char** argv) { return otai::cli::run_cli(argc, argv); }
