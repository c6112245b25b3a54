#pragma once

#include <stdexcept>
#include <string>

namespace har {

// Base error for the library. The CLI maps InputError to exit code 2
// (bad files/config) and everything else to exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable, malformed or inconsistent input (files, config, flags).
struct InputError : Error {
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// Numerical failure: non-finite loss, broken invariant, failed check.
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace har
