#include "sixcyl/cli.hpp"

int main(int argc, char** argv) { return sixcyl::cli::run(argc, argv); }
