#pragma once

#include <stdexcept>
#include <string>

namespace cechlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed spaces, differentials or embeddings.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain of a field.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis of an operation does not hold for the given data.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cechlab
