#pragma once

#include <stdexcept>

namespace eemod {

// Base class for every failure raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside an operation's domain (non-finite input, odd
// constellation size, non-positive rate, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A bracketing search found no sign change.
class BracketingError : public Error {
 public:
  using Error::Error;
};

// An iterative method exhausted its budget before reaching tolerance, or a
// computed fixed point failed its independent cross-check.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A scheme or scenario is mis-configured (missing coding gain, bad JSON, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Requested efficiency target is at or above the achievable supremum 1 - 2^-L.
class InfeasibleTargetError : public Error {
 public:
  using Error::Error;
};

// Offered load reaches the link's service capability; the queue has no steady
// state at this operating point. Distinct from DomainError so callers can
// react by raising the rate or constellation size instead of aborting.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// The delay bound cannot be met at the probed rate / constellation budget.
class DelayInfeasibleError : public Error {
 public:
  using Error::Error;
};

// No power vector can realize all users' SIR targets (sum of sizes >= 1).
class SystemInfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace eemod
