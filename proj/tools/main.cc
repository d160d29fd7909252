#include "cli.h"

int main(int argc, char** argv) { return gscp::cli::run(argc, argv); }
