#include <cbt/cli.hpp>

int main(int argc, char** argv) { return cbt::cli::run_cli(argc, argv); }
