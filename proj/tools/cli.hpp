#pragma once

#include <ostream>

#include "homvcp/errors.hpp"

namespace homvcp {

/// Process exit code for an error kind: 1 IO, 2 domain, 3 solver,
/// 4 unsupported, 6 contract violation. 5 is reserved for failed
/// verifications.
int exit_code(ErrorKind kind);

/// Runs the command line; output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homvcp
