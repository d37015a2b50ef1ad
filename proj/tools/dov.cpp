#include "dov/cli.hpp"

int main(int argc, char** argv) { return dov::dispatch(argc, argv); }
