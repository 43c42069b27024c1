#include "commands.hpp"

int main(int argc, char** argv) { return relmetric::cli::run(argc, argv); }
