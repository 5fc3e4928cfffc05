#pragma once

#include <stdexcept>
#include <string>

namespace doa {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed textual input (documents, decimal literals, scripts).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A price or tick does not fit the epsilon grid.
class GridError : public Error {
 public:
  using Error::Error;
};

/// An action violates a mechanism rule; the message names the rule.
class RuleViolation : public Error {
 public:
  using Error::Error;
};

/// A schedule named an agent that cannot be recognized.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Lookup of an unknown agent, edge, or pair.
class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace doa
