#include "lrd/cli.hpp"

int main(int argc, char** argv) { return lrd::run_main(argc, argv); }
