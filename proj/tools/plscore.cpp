#include "plscore/cli.hpp"

int main(int argc, char** argv) { return plscore::cli_main(argc, argv); }
