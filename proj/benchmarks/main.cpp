#include <benchmark/benchmark.h>

// The distro ships benchmark_main only as LTO bytecode; provide main here instead.
BENCHMARK_MAIN();
