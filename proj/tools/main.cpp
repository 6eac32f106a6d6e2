#include "ipp/cli.hpp"

int main(int argc, char** argv) { return ipp::run(argc, argv); }
