#pragma once

#include <stdexcept>
#include <string>

namespace plscore {

// Error taxonomy. The CLI maps each kind onto a distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user configuration (flags, config file, unknown enum names).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a dataset invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Component extraction stopped early; `achieved` components were built.
class DegenerateComponent : public NumericalError {
 public:
  DegenerateComponent(const std::string& what, int achieved)
      : NumericalError(what + " (after " + std::to_string(achieved) +
                       " components)"),
        achieved_(achieved) {}
  int achieved() const noexcept { return achieved_; }

 private:
  int achieved_;
};

}  // namespace plscore
