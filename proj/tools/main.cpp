#include "hebbd/cli.hpp"

int main(int argc, char** argv) { return hebbd::cli::run_command(argc, argv); }
