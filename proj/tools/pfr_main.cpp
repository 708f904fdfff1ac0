#include "pfr/cli.hpp"

int main(int argc, char** argv) { return pfr::run_cli(argc, argv); }
