#include "wrapkit/cli.hpp"

int main(int argc, char** argv) { return wrapkit::cli::run(argc, argv); }
