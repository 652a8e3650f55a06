#pragma once

#include <iosfwd>

namespace agc::cli {

/// Runs the agcsim command line. Returns the process exit code:
/// 0 success, 2 usage, 3 data error, 4 numeric failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace agc::cli
