#pragma once

namespace epns {

/// Command-line entry point. Returns 0 on success, 1 on a validation
/// error and 2 on a numerical failure.
int cli_main(int argc, char** argv);

}  // namespace epns
