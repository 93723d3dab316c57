#include "dslpn/cli.hpp"

int main(int argc, char** argv) { return dslpn::runCli(argc, argv); }
