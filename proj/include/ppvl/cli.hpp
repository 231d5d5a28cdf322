#pragma once

namespace ppvl::cli {

/// Exit codes: 0 success, 1 invalid input, 2 numerical failure.
int run(int argc, char** argv);

} // namespace ppvl::cli
