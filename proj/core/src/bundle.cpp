#include "hiernet/bundle.hpp"

#include <fstream>
#include <set>

#include "hiernet/json_io.hpp"

namespace hiernet {

namespace {

enum class Visit { Pending, Active, Done };

class BundleLoader {
 public:
  explicit BundleLoader(const json& nets) : nets_(nets) {
    for (const auto& [name, _] : nets.items()) visit_[name] = Visit::Pending;
  }

  NetBundle load(std::string root) {
    for (const auto& [name, _] : nets_.items()) build(name);
    NetBundle bundle;
    bundle.nets = std::move(built_);
    bundle.root = std::move(root);
    return bundle;
  }

 private:
  static std::string kind_of(const json& j) {
    if (j.contains("bindings")) return "hierarchical";
    if (j.contains("transition_spans")) return "guarded";
    return "flat";
  }

  std::shared_ptr<const NetDef> build(const std::string& name) {
    if (auto it = built_.find(name); it != built_.end()) return it->second;
    const std::string path = "/nets" + pointer_token(name);
    visit_[name] = Visit::Active;
    const json& j = nets_.at(name);
    if (!j.is_object()) throw ValidationError(path, "expected a net object");

    std::shared_ptr<const NetDef> def;
    const std::string kind = kind_of(j);
    if (kind == "hierarchical") {
      auto resolve = [&](const std::string& child) -> std::shared_ptr<const NetDef> {
        auto state = visit_.find(child);
        if (state == visit_.end()) return nullptr;
        if (state->second == Visit::Active) {
          throw ValidationError(path + "/bindings",
                                "net '" + child + "' is its own ancestor");
        }
        return build(child);
      };
      def = std::make_shared<const NetDef>(hierarchical_net_from_json(j, resolve, path));
    } else if (kind == "guarded") {
      def = std::make_shared<const NetDef>(guarded_net_from_json(j, path));
    } else {
      def = std::make_shared<const NetDef>(petri_net_from_json(j, path));
      if (j.contains("origin")) check_origin(def->flat(), j["origin"], path + "/origin");
    }
    visit_[name] = Visit::Done;
    built_.emplace(name, def);
    return def;
  }

  static void check_origin(const PetriNet& net, const json& origin, const std::string& path) {
    auto check = [&](const char* key, auto&& declared) {
      const std::string p = path + "/" + key;
      if (!origin.contains(key) || !origin[key].is_object()) {
        throw ValidationError(p, "expected an object");
      }
      std::set<std::pair<std::string, std::string>> images;
      for (const auto& [id, pair] : origin[key].items()) {
        if (!declared(id)) throw ValidationError(p + pointer_token(id), "unknown generated id");
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
          throw ValidationError(p + pointer_token(id), "expected [source, state]");
        }
        if (!images.emplace(pair[0].template get<std::string>(), pair[1].template get<std::string>()).second) {
          throw ValidationError(p + pointer_token(id), "origin is not injective");
        }
      }
      return images.size();
    };
    const auto places = check("places", [&](const std::string& id) { return net.has_place(id); });
    const auto transitions =
        check("transitions", [&](const std::string& id) { return net.has_transition(id); });
    if (places != net.places().size() || transitions != net.transitions().size()) {
      throw ValidationError(path, "origin tables must cover every place and transition");
    }
  }

  const json& nets_;
  std::map<std::string, Visit> visit_;
  std::map<std::string, std::shared_ptr<const NetDef>, std::less<>> built_;
};

void collect(const std::shared_ptr<const NetDef>& def, const std::string& name, NetBundle& out) {
  if (auto it = out.nets.find(name); it != out.nets.end()) {
    if (it->second != def && to_json(*it->second) != to_json(*def)) {
      throw ValidationError("/nets" + pointer_token(name), "two different nets share this name");
    }
    return;
  }
  out.nets.emplace(name, def);
  if (def->is_hierarchical()) {
    for (const auto& [_, b] : def->hierarchical().bindings()) collect(b.child, b.child_name, out);
  }
}

}  // namespace

const NetDef& NetBundle::root_net() const {
  auto def = find(root);
  if (!def) throw UnknownIdError("net", root);
  return *def;
}

std::shared_ptr<const NetDef> NetBundle::find(std::string_view name) const {
  auto it = nets.find(name);
  return it == nets.end() ? nullptr : it->second;
}

NetBundle parse_bundle(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "expected a JSON object");
  if (!doc.contains("nets")) {
    json wrapped = {{"nets", {{"main", doc}}}, {"root", "main"}};
    try {
      return BundleLoader(wrapped["nets"]).load("main");
    } catch (const ValidationError& e) {
      // Report locations relative to the single-net document.
      const std::string prefix = "/nets/main";
      if (e.path().rfind(prefix, 0) == 0) {
        throw ValidationError(e.path().substr(prefix.size()), e.detail());
      }
      throw;
    }
  }
  const json& nets = doc["nets"];
  if (!nets.is_object() || nets.empty()) {
    throw ValidationError("/nets", "expected a non-empty object of nets");
  }
  if (!doc.contains("root") || !doc["root"].is_string()) {
    throw ValidationError("/root", "expected the name of the root net");
  }
  const std::string root = doc["root"].get<std::string>();
  if (!nets.contains(root)) throw ValidationError("/root", "unknown net '" + root + "'");
  return BundleLoader(nets).load(root);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

NetBundle load_bundle(const std::filesystem::path& path) {
  return parse_bundle(read_json_file(path));
}

json bundle_to_json(const NetBundle& bundle) {
  json nets = json::object();
  for (const auto& [name, def] : bundle.nets) nets[name] = to_json(*def);
  return {{"nets", std::move(nets)}, {"root", bundle.root}};
}

NetBundle closure_bundle(std::shared_ptr<const NetDef> def, const std::string& name) {
  NetBundle out;
  out.root = name;
  collect(def, name, out);
  return out;
}

}  // namespace hiernet
