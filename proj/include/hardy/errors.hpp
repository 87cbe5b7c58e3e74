#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

// Base of every error raised by the library. Numerical failures and
// malformed input are distinguished by subclass so that callers (the CLI in
// particular) can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// sup |R| exceeds 1 + tol_unit.
class NotContraction : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// 1 - |R|^2 is too close to zero somewhere on the grid for log to be taken.
class SzegoViolation : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class DuplicatePoint : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateDerivative : public Error {
 public:
  using Error::Error;
};

class RejectBoundary : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class OrderViolation : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace hardy
