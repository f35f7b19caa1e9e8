#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdamean {

//! No design point carries kernel mass in the requested window.
class DegenerateWindowError : public std::runtime_error {
public:
  explicit DegenerateWindowError(const std::string& what)
      : std::runtime_error(what) {}
};

//! The local least-squares system is too close to singular; the caller may
//! retry with a larger bandwidth.
class IllConditionedWindowError : public std::runtime_error {
public:
  IllConditionedWindowError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

//! Every candidate bandwidth failed (ill-conditioned or degenerate).
class NoValidBandwidthError : public std::runtime_error {
public:
  explicit NoValidBandwidthError(const std::string& what)
      : std::runtime_error(what) {}
};

//! An iterative numeric routine failed to converge or factorize.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

//! Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line(line) {}
  std::size_t line;
};

//! Structurally valid file whose contents violate a dataset invariant.
class InvalidDataError : public std::runtime_error {
public:
  explicit InvalidDataError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace fdamean
