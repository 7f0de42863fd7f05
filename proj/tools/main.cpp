#include "sedlab_cli/commands.hpp"

int main(int argc, char** argv) { return sedlab::cli::main_entry(argc, argv); }
