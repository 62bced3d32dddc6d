#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hiernet {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural invariant was violated. `path()` is a JSON pointer relative to
/// the object being validated (empty for the object itself).
class ValidationError : public Error {
 public:
  ValidationError(std::string path, std::string detail);

  const std::string& path() const noexcept { return path_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Returns the same error located under `prefix` (itself a JSON pointer).
  ValidationError prefixed(std::string_view prefix) const;

 private:
  std::string path_;
  std::string detail_;
};

class UnknownIdError : public Error {
 public:
  UnknownIdError(std::string_view kind, std::string_view id);

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// A transition was fired at a marking that does not cover its precondition.
/// When raised while replaying an execution, `step()` is the failing index.
class NotEnabledError : public Error {
 public:
  explicit NotEnabledError(std::string transition,
                           std::optional<std::size_t> step = std::nullopt);

  const std::string& transition() const noexcept { return transition_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::string transition_;
  std::optional<std::size_t> step_;
};

/// Escapes one reference token of a JSON pointer (RFC 6901).
std::string pointer_token(std::string_view token);

}  // namespace hiernet
