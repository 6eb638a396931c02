#include "rankthresh/cli.hpp"

int main(int argc, char** argv) { return rankthresh::dispatch(argc, argv); }
