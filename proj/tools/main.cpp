#include "memdg/cli.hpp"

int main(int argc, char** argv) { return memdg::run_main(argc, argv); }
