#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hiernet {

/// Composite element ids. A tuple of ids is written `(x,y,z)`; the empty tuple
/// is `()`. Inside a component the characters `\ ( ) ,` are escaped with a
/// backslash, so the encoding is injective and nests: an encoded tuple may be
/// a component of another tuple.
std::string encode_tuple(std::span<const std::string> components);
std::string encode_tuple(std::initializer_list<std::string> components);

/// Inverse of encode_tuple. Throws ValidationError on malformed input.
std::vector<std::string> decode_tuple(std::string_view encoded);

bool is_tuple_id(std::string_view id);

}  // namespace hiernet
