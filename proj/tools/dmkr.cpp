#include "dmkr/driver.hpp"

int main(int argc, char** argv) { return dmkr::run_cli(argc, argv); }
