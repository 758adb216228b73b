#ifndef MODOP_ERROR_HPP_
#define MODOP_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace modop {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that does not satisfy a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input. `path()` is a JSON pointer to the offending
// value ("" for the document root).
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)),
        message_(message) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

// A computation exceeded a configured size bound.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace modop

#endif  // MODOP_ERROR_HPP_
