#pragma once

#include <string>

namespace srb::cli {

// Full command-line driver. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure (step index reported on stderr).
int run_cli(int argc, char** argv);

// 17-significant-digit decimal formatting used for all CSV output, so
// downstream fits are not quantization-limited.
std::string fmt17(double x);

} // namespace srb::cli
