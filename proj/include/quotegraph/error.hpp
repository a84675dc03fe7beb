#pragma once

#include <stdexcept>
#include <string>

namespace quotegraph {

// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kUsage,       // bad arguments, unknown ranker, out-of-range config
  kIo,          // file cannot be opened, read or written
  kSchema,      // a record does not follow its documented schema
  kData,        // inputs are well-formed but cannot satisfy the request
  kPrecondition // an operation was called outside its domain
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        kind_(kind),
        code_(std::move(code)),
        message_(message) {}

  ErrorKind kind() const { return kind_; }
  // Short machine-readable name, e.g. "GraphTooLarge".
  const std::string& code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string message_;
};

}  // namespace quotegraph
