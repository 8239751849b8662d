#include "lieadapt/cli.hpp"

int main(int argc, char** argv) { return lieadapt::run_cli(argc, argv); }
