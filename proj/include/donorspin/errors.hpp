#pragma once

#include <stdexcept>
#include <string>

namespace donorspin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: non-finite entries, zero radii, regime mismatch.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Lookup of an unregistered species, material, target or topic.
class RegistryError : public Error {
 public:
  using Error::Error;
};

/// No sign change of the function inside the bracket.
class BracketingError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point lies outside the formula's domain of validity.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A Hamiltonian couples sectors that must be decoupled.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Eigenvector continuation lost track of a state between grid points.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unresolvable sweep specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace donorspin
