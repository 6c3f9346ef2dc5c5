//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_UTIL_ERROR_H_
#define PAGFORGE_UTIL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pagforge {

class Error: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed SMILES. position is the byte offset where the
// problem was detected.
class SmilesError: public Error {
public:
  enum class Kind {
    kSyntax,
    kUnclosedRing,
    kUnmatchedBracket,
    kUnmatchedBranch,
    kUnknownElement,
    kValence,
    kKekulize,
  };

  SmilesError(Kind kind, std::size_t position, const std::string &what)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        kind_(kind), position_(position) { }

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

private:
  Kind kind_;
  std::size_t position_;
};

class NotFoundError: public Error {
public:
  using Error::Error;
};

class InvalidArgument: public Error {
public:
  using Error::Error;
};

// Numerical failure (non-finite loss, divergence).
class NumericError: public Error {
public:
  using Error::Error;
};

} // namespace pagforge

#endif // PAGFORGE_UTIL_ERROR_H_
