#pragma once

#include <stdexcept>
#include <string>

namespace ietlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Construction-time validation.
struct NonUnitSum : Error {
  using Error::Error;
};
struct NegativeLength : Error {
  using Error::Error;
};
struct NotAPermutation : Error {
  using Error::Error;
};

// Dynamical preconditions.
struct OutOfDomain : Error {
  using Error::Error;
};
struct DegenerateLength : Error {
  using Error::Error;
};

// Induction on a rational sample eventually reaches l_d == l_{pi^-1(d)},
// where the first-return construction is undefined. Expansions report this
// as a flagged terminal state; only the single-step API throws.
struct TieBreakdown : Error {
  using Error::Error;
};

struct ReduciblePermutation : Error {
  using Error::Error;
};
struct SearchBudgetExceeded : Error {
  using Error::Error;
};
struct SeriesTooShort : Error {
  using Error::Error;
};
struct InsufficientData : Error {
  using Error::Error;
};
struct UnmappedClaim : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace ietlab
