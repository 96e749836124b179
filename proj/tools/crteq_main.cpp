#include "crteq/cli.hpp"

int main(int argc, char** argv) { return crteq::run_cli(argc, argv); }
