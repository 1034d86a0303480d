#pragma once

#include <ostream>

namespace rdspec {

/// Command-line entry point: run, compare, upsample, list-models, describe.
/// Returns 0 on success, 1 on validation errors, 2 on a numerical abort.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdspec
