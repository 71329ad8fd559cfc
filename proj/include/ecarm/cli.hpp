#pragma once

// Command-line front end. Exit codes: 0 success, 1 domain error (report
// carries an "error" object), 2 usage error.

#include <iosfwd>
#include <string>
#include <vector>

namespace ecarm::cli {

inline constexpr const char* kVersion = "0.1.0";

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecarm::cli
