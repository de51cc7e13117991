#include "delayrep/cli/cli.hpp"

int main(int argc, char** argv) { return delayrep::cli::run(argc, argv); }
