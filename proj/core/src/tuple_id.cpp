#include "hiernet/tuple_id.hpp"

#include "hiernet/errors.hpp"

namespace hiernet {

namespace {

bool needs_escape(char c) {
  return c == '\\' || c == '(' || c == ')' || c == ',';
}

}  // namespace

std::string encode_tuple(std::span<const std::string> components) {
  std::string out = "(";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i > 0) out.push_back(',');
    for (char c : components[i]) {
      if (needs_escape(c)) out.push_back('\\');
      out.push_back(c);
    }
  }
  out.push_back(')');
  return out;
}

std::string encode_tuple(std::initializer_list<std::string> components) {
  return encode_tuple(std::span<const std::string>(components.begin(), components.size()));
}

std::vector<std::string> decode_tuple(std::string_view encoded) {
  if (encoded.size() < 2 || encoded.front() != '(' || encoded.back() != ')') {
    throw ValidationError("", "malformed tuple id '" + std::string(encoded) + "'");
  }
  std::vector<std::string> out;
  const std::string_view body = encoded.substr(1, encoded.size() - 2);
  if (body.empty()) return out;
  std::string current;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '\\') {
      if (i + 1 == body.size()) {
        throw ValidationError("", "dangling escape in tuple id '" + std::string(encoded) + "'");
      }
      current.push_back(body[++i]);
    } else if (c == ',') {
      out.push_back(std::move(current));
      current.clear();
    } else if (c == '(' || c == ')') {
      throw ValidationError("", "unescaped bracket in tuple id '" + std::string(encoded) + "'");
    } else {
      current.push_back(c);
    }
  }
  out.push_back(std::move(current));
  return out;
}

bool is_tuple_id(std::string_view id) {
  try {
    decode_tuple(id);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

}  // namespace hiernet
