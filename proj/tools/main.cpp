#include "cli.hpp"

int main(int argc, char** argv) { return pmtm::cli::run(argc, argv); }
