#pragma once

#include <stdexcept>
#include <string>

namespace simplify {

// Malformed or inconsistent input data (corpus files, score tables, ...).
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad command-line usage. The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simplify
