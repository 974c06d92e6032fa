#include "cli.hpp"

int main(int argc, char** argv) { return vorhom::cli::run(argc, argv); }
