#include "domes/domes.h"

int main(int argc, char** argv) { return domes_cli_main(argc, argv); }
