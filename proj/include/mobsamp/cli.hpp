#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mobsamp::cli {

inline constexpr const char* kConfigVersion = "mobsamp-config/1";
inline constexpr const char* kToolVersion = "1.0.0";

/// Runs the command-line front end. Exit codes: 0 success, 1 error,
/// 2 when `certify` does not return CERTIFIED.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace mobsamp::cli
