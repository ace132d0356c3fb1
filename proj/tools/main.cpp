#include "towbombe/cli.hpp"

int main(int argc, char** argv) { return towbombe::cli_main(argc, argv); }
