#pragma once

#include <iosfwd>

namespace ufckit {

/// Runs the command line; returns 0 on success, 1 on a domain error, 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ufckit
