#pragma once

#include <stdexcept>
#include <string>

namespace cbt {

// Out-of-range or inconsistent arguments.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A transaction whose signature does not check out.
class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation invoked at the wrong point of the span schedule.
class SequencingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Failure during a simulation run (e.g. the gossip slot cap was hit).
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration file or command-line flag.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename Error = ParameterError>
inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

}  // namespace detail
}  // namespace cbt
