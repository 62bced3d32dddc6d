#include "hiernet/errors.hpp"

namespace hiernet {

namespace {

std::string located(const std::string& path, const std::string& detail) {
  return (path.empty() ? std::string("/") : path) + ": " + detail;
}

std::string not_enabled_message(const std::string& transition,
                                std::optional<std::size_t> step) {
  std::string msg = "transition '" + transition + "' is not enabled";
  if (step) msg += " at step " + std::to_string(*step);
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::string path, std::string detail)
    : Error(located(path, detail)),
      path_(std::move(path)),
      detail_(std::move(detail)) {}

ValidationError ValidationError::prefixed(std::string_view prefix) const {
  return ValidationError(std::string(prefix) + path_, detail_);
}

UnknownIdError::UnknownIdError(std::string_view kind, std::string_view id)
    : Error("unknown " + std::string(kind) + " '" + std::string(id) + "'"),
      id_(id) {}

NotEnabledError::NotEnabledError(std::string transition,
                                 std::optional<std::size_t> step)
    : Error(not_enabled_message(transition, step)),
      transition_(std::move(transition)),
      step_(step) {}

std::string pointer_token(std::string_view token) {
  std::string out;
  out.reserve(token.size() + 1);
  out.push_back('/');
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace hiernet
