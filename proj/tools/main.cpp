#include "cli.hpp"

int main(int argc, char** argv) { return epns::cli_main(argc, argv); }
