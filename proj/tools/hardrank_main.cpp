#include "hardrank/cli.hpp"

int main(int argc, char** argv) { return hardrank::run_cli(argc, argv); }
