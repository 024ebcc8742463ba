#include "edsys/cli.hpp"

int main(int argc, char** argv) { return edsys::cli_main(argc, argv); }
