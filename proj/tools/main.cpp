#include "ppvl/cli.hpp"

int main(int argc, char** argv) { return ppvl::cli::run(argc, argv); }
