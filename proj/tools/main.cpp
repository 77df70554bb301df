#include "nonloc/cli.hpp"

int main(int argc, char** argv) { return nonloc::run_cli(argc, argv); }
