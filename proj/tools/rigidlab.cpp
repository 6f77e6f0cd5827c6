#include "rigidlab/cli.hpp"

int main(int argc, char** argv) { return rigidlab::run_cli(argc, argv); }
