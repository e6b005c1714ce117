#pragma once

#include <stdexcept>
#include <string>

namespace climkg {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data or configuration violates a documented contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem, network, or subprocess failure at runtime.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

/// A network request failed after all retries. Carries the pagination cursor
/// so the caller can resume the harvest.
class RetryableFetchError : public RuntimeFailure {
 public:
  RetryableFetchError(const std::string& what, std::string cursor)
      : RuntimeFailure(what), cursor_(std::move(cursor)) {}

  const std::string& cursor() const noexcept { return cursor_; }

 private:
  std::string cursor_;
};

}  // namespace climkg
