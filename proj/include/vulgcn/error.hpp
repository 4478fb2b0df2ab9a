#pragma once

#include <stdexcept>
#include <string>

namespace vulgcn {

/// Failure categories; each maps to one CLI exit code.
enum class ErrorKind {
  usage = 1,
  data = 2,
  divergence = 3,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

inline Error data_error(const std::string &what) {
  return Error(ErrorKind::data, what);
}

inline Error usage_error(const std::string &what) {
  return Error(ErrorKind::usage, what);
}

/// Error raised while parsing a text file; carries the 1-based line number.
inline Error parse_error(const std::string &file, std::size_t line,
                         const std::string &what) {
  return data_error(file + ":" + std::to_string(line) + ": " + what);
}

} // namespace vulgcn
