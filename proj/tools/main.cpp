#include "rheograph/cli.hpp"

int main(int argc, char** argv) { return rheo::cli_main(argc, argv); }
