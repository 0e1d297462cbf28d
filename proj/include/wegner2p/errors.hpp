#pragma once

#include <stdexcept>
#include <string>

namespace wegner2p {

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An outcome that would contradict a proven statement (e.g. an empty
/// separation classification for boxes that satisfy the distance condition).
/// Never swallowed by the experiment harness.
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wegner2p
