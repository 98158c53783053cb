#pragma once

#include <stdexcept>
#include <string>

namespace jobroute {

// Malformed input files, invalid parameters, failed validations.
// The CLI maps this to exit code 2.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jobroute
