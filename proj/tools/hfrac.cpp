#include "hfrac/cli.hpp"

int main(int argc, char** argv) { return hfrac::run(argc, argv); }
