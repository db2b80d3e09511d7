#include "zocoop/cli.hpp"

int main(int argc, char** argv) { return zocoop::cli_run(argc, argv); }
