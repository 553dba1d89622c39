#pragma once

#include <string>
#include <vector>

namespace molembed::cli {

// Entry point shared by the binary and the integration tests. Returns the
// process exit status: 0 on success, 1 on a reported error (JSON object on
// stderr), 2 on usage errors.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

} // namespace molembed::cli
