#include "harness.hpp"

int main(int argc, char** argv) { return haarint::cli::run_cli(argc, argv); }
