#include "unseen/cli.hpp"

int main(int argc, char** argv) { return unseen::cli::run(argc, argv); }
