#pragma once

#include <stdexcept>
#include <string>

namespace lexsat {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse: mismatched lengths, undeclared variables, malformed arguments.
struct ContractError : Error {
  using Error::Error;
};

// An enumeration bound or step cap was exceeded.
struct ResourceError : Error {
  using Error::Error;
};

// A class-specific operation was applied to a relation or set that lacks the
// required property.
struct PreconditionError : Error {
  using Error::Error;
};

// dispatch() with the fallback forbidden hit an instance outside the
// tractable classes.
struct DispatchError : Error {
  using Error::Error;
};

// A transformation could not be applied: no case matched, or a required
// gadget was not found within the search budget.
struct ReductionError : Error {
  using Error::Error;
};

// Instance text was rejected. Carries the 1-based source position; what()
// already includes it.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
        line(line_),
        column(column_) {}
};

}  // namespace lexsat
