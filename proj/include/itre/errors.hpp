#pragma once

#include <stdexcept>
#include <string>

namespace itre {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments / malformed config. CLI maps this to exit code 1.
struct UsageError : Error {
  using Error::Error;
};

// Unreadable files, undecodable images, write failures. Exit code 2.
struct IoError : Error {
  using Error::Error;
};

// NaN/Inf in an iterate, solver non-convergence. Exit code 3.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace itre
