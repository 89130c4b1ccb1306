#pragma once

// Command-line front end: one JSON document on the output stream, a short summary on the error
// stream. Exit codes: 0 success, 1 validation failure, 2 convergence failure, 3 I/O or format error.

#include <ostream>

#include "circlepat/error.hpp"

namespace circlepat::cli {

inline constexpr const char* kVersion = "0.1.0";

int exit_code(ErrorKind kind);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace circlepat::cli
