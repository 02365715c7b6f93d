#pragma once

#include <stdexcept>
#include <string>

namespace mhull {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

// Input exceeds a documented magnitude ceiling.
class CeilingExceeded : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class TooFewVertices : public Error {
 public:
  using Error::Error;
};

// Every coefficient of a polynomial vanishes modulo the modulus.
class AllZeroMod : public Error {
 public:
  using Error::Error;
};

class InfiniteFamily : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mhull
