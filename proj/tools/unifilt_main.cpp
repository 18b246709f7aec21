#include "unifilt/cli.hpp"

int main(int argc, char** argv) { return unifilt::run_cli(argc, argv); }
