#include "synecg/cli.hpp"

int main(int argc, char** argv) { return synecg::cli::run(argc, argv); }
