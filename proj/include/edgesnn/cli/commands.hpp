#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgesnn::cli {

// Exit codes: 0 ok, 1 unexpected failure, 2 configuration or usage error,
// 3 simulation invariant violated.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace edgesnn::cli
