#include "commands.hpp"

int main(int argc, char** argv) { return pensive::cli::cli_main(argc, argv); }
