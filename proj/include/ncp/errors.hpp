#pragma once

#include <stdexcept>
#include <string>

namespace ncp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or basis size cap would be exceeded.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Dimension or order mismatch between inputs.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Operators from different Fock spaces were combined.
class MixedSpaceError : public Error {
 public:
  using Error::Error;
};

/// An operator word is longer than the truncation depth supports.
class DepthError : public Error {
 public:
  using Error::Error;
};

/// The mixed-moment recursion exceeded its depth guard.
class RecursionLimitError : public Error {
 public:
  using Error::Error;
};

/// A marginal law is missing a required moment.
class MissingLawError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold (e.g. non-symmetric tuple).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A job payload does not match its command's schema; the message names the
/// offending field.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A numerical contract was violated (an oracle comparison failed or a
/// value that must be real came out complex at output time).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncp
