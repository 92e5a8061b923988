#pragma once

#include <stdexcept>
#include <string>

namespace nhb {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A ModelParams invariant is violated.
class InvalidParams : public Error {
public:
  using Error::Error;
};

/// g1 = g2 = 0: the stationarity condition carries no density dependence.
class DegenerateReduction : public Error {
public:
  using Error::Error;
};

/// p - g2 x < 0, i.e. the density is not admissible as a steady state.
class NegativeGain : public Error {
public:
  using Error::Error;
};

/// The closed-form relative phase is 0/0 (n_C = n_X together with delta = g1 x).
class PhaseIndeterminate : public Error {
public:
  using Error::Error;
};

/// The exceptional point only exists for blue detuning (delta > 0).
class NotBlueDetuned : public Error {
public:
  using Error::Error;
};

/// The bistability window does not close inside the requested bracket.
class BracketInvalid : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace nhb
