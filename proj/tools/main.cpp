#include "cli.hpp"

int main(int argc, char** argv) { return clonelab::cli::run(argc, argv); }
