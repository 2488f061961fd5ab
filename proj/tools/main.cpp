#include "cli.hpp"

int main(int argc, char** argv) { return nlg::cli::run(argc, argv); }
