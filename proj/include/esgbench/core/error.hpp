#pragma once

#include <stdexcept>
#include <string>

namespace esgbench {

/// Base for every error the library raises. Data-quality problems found
/// during validation are not errors; they are reported as rejections.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace esgbench
