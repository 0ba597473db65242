#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace gofsim {

// Error categories. The numeric values are the CLI exit codes.
enum class ErrorKind : int {
  Io = 2,
  Estimation = 3,
  InvalidInput = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error io_error(const std::string& message) {
  return Error(ErrorKind::Io, message);
}

inline Error estimation_error(const std::string& message) {
  return Error(ErrorKind::Estimation, message);
}

inline Error invalid_input(const std::string& message) {
  return Error(ErrorKind::InvalidInput, message);
}

// Runs fn, prefixing any gofsim::Error with a stage label.
template <typename Fn>
decltype(auto) with_stage(std::string_view stage, Fn&& fn) {
  try {
    return std::forward<Fn>(fn)();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace gofsim
