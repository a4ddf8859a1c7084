#pragma once

#include <stdexcept>
#include <string>

namespace delasp {

// Location of a token in an input file, 1-based. `file` may be a synthetic
// name such as "<string>" when parsing from memory.
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;

  std::string str() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
  }
};

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the text readers. Always carries the position of the offending
// token.
class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& what)
      : Error(span.str() + ": " + what), span_(std::move(span)) {}

  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

// Raised when an input exceeds a configured search cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(what) {}
};

}  // namespace delasp
