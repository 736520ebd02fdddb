#include "cueharvest/cli.hpp"

int main(int argc, char** argv) { return cueharvest::run_cli(argc, argv); }
