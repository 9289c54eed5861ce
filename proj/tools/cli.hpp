#pragma once

#include <ostream>

namespace svgeom::cli {

enum ExitCode : int { ok = 0, usage_error = 1, domain_error = 2, resource_error = 3, selftest_failed = 4 };

/// Parses argv, runs one subcommand and writes a single JSON document to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svgeom::cli
