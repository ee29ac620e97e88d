#include "mobsamp/cli.hpp"

int main(int argc, char** argv) { return mobsamp::cli::run(argc, argv); }
