#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hiernet/errors.hpp"
#include "hiernet/hierarchy.hpp"

namespace hiernet {

/// Named net definitions; hierarchical nets refer to their children by name.
struct NetBundle {
  std::map<std::string, std::shared_ptr<const NetDef>, std::less<>> nets;
  std::string root;

  const NetDef& root_net() const;
  /// Null if unknown.
  std::shared_ptr<const NetDef> find(std::string_view name) const;
};

/// The input file is not valid JSON or cannot be read.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Accepts `{"nets": {...}, "root": name}` or a single net object, which
/// becomes a bundle holding one net named "main". Every invariant is checked
/// eagerly, including acyclic child references; ValidationError paths are
/// JSON pointers into the document.
NetBundle parse_bundle(const nlohmann::json& doc);
NetBundle load_bundle(const std::filesystem::path& path);

nlohmann::json bundle_to_json(const NetBundle& bundle);

/// Bundle holding `def` as root under `name` plus every net it references.
NetBundle closure_bundle(std::shared_ptr<const NetDef> def, const std::string& name);

/// Reads a JSON document from disk. Throws ParseError.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace hiernet
