#pragma once

#include <iosfwd>

namespace potts_af::cli {

// Parses arguments (and an optional --config JSON file), runs the command and writes its document.
// Returns 0 on success and nonzero whenever an error record was written.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace potts_af::cli
