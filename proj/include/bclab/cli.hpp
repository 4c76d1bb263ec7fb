#pragma once

#include <iosfwd>

namespace bclab {

// Entry point of the bclab command-line tool. Returns the process exit status:
// 0 success, 1 usage, 2 validation or domain error, 3 numeric failure,
// 4 resource limit, 5 unsupported request.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bclab
