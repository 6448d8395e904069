#include "cli.hpp"

int main(int argc, char** argv) { return candlecast::cli::run(argc, argv); }
