#include "hardy/experiment.hpp"

int main(int argc, char** argv) { return hardy::run_cli(argc, argv); }
