#pragma once

#include <stdexcept>
#include <string>

namespace ridgeprox {

// Raised for every rejected input or violated precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ridgeprox
