#include "shiftgeom/cli.hpp"

int main(int argc, char** argv) { return shiftgeom::cli_main(argc, argv); }
