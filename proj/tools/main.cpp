#include "cli.hpp"

int main(int argc, char** argv) { return folcyc::cli::run(argc, argv); }
