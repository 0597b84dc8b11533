#include "kinhj/harness.hpp"

int main(int argc, char** argv) { return kinhj::cli_main(argc, argv); }
