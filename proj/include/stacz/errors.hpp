#pragma once

#include <stdexcept>
#include <string>

namespace stacz {

// Three failure classes; the CLI maps them to exit codes 2, 3 and 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stacz
