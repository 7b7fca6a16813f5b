#include "spinbound/config.hpp"

int main(int argc, char** argv) { return spinbound::run_cli(argc, argv); }
