#pragma once

#include <stdexcept>
#include <string>

namespace fsmlp {

/// Base exception for every precondition or input failure raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error(what) {}
};

}  // namespace fsmlp
