#ifndef HPL_ERRORS_HPP
#define HPL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hpl {

/// Malformed or inconsistent input (wrong arity, unknown name, degree out of window, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structure could not be built because a required identity fails.
/// The message carries a rendering of the defect report.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated; indicates a bug or an invalid object
/// that slipped past validation.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hpl

#endif  // HPL_ERRORS_HPP
