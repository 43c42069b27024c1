#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relmetric::cli {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 domain or validation error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace relmetric::cli
