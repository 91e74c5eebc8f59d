#pragma once

#include <ostream>

namespace uavtrack::cli {

/// Exit codes: 0 success, 1 internal error, 2 usage or validation error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uavtrack::cli
