#pragma once

#include <iosfwd>

namespace psidensity {

// Parses argv and dispatches to the computation modules.
// Exit code 0 on success (for verify: zero fail verdicts), 1 on fail
// verdicts, 2 on usage or validation errors. Diagnostics go to err,
// data to files or out.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace psidensity
