#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mzkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The sampling matrix of a generation does not have full column rank
/// (fewer points than the dimension of the polynomial space, or repeated
/// points collapsing the rank).
class RankDeficientError : public Error {
 public:
  RankDeficientError(int n, std::size_t m, const std::string& what)
      : Error(what), n_(n), m_(m) {}

  int n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }

 private:
  int n_;
  std::size_t m_;
};

/// Malformed input file. `location` is a JSON pointer or "line:col" string.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location + ": " + what), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace mzkit
