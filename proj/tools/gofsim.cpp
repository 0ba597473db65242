#include "gofsim/cli.hpp"

int main(int argc, char** argv) { return gofsim::cli::run(argc, argv); }
