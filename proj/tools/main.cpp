#include "commands.hpp"

int main(int argc, char** argv) { return spike_regions::cli::run_cli(argc, argv); }
