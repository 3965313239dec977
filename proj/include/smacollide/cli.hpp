#pragma once

#include <ostream>

namespace smacollide {

// Command-line driver. Exit codes: 0 success, 1 solver failure or non-convergence,
// 2 configuration or usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smacollide
