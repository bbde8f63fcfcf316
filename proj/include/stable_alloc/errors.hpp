#pragma once

#include <stdexcept>
#include <string>

namespace stalloc {

// Bad arguments, malformed configuration, mismatched instances.
class InvalidInputError : public std::runtime_error {
 public:
  explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed file content; carries the 1-based line number when known.
class ParseError : public InvalidInputError {
 public:
  ParseError(const std::string& path, long line, const std::string& msg)
      : InvalidInputError(path + ":" + std::to_string(line) + ": " + msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Filesystem / stream failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stalloc
