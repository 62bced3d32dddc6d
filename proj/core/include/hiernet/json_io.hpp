#pragma once

#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "hiernet/guarded_net.hpp"
#include "hiernet/hierarchy.hpp"
#include "hiernet/internalize.hpp"
#include "hiernet/petri_net.hpp"

// JSON encodings of the engine's values. Readers throw ValidationError whose
// path is a JSON pointer below the `path` argument.

namespace hiernet {

using nlohmann::json;

json to_json(const Multiset& m);
Multiset multiset_from_json(const json& j, const std::string& path = "");

/// `{"places": [...], "transitions": [{"id", "pre", "post"}, ...]}`
json to_json(const PetriNet& net);
PetriNet petri_net_from_json(const json& j, const std::string& path = "");

/// `{"start": {...}, "steps": ["t", ...]}`
json to_json(const Execution& e);
Execution execution_from_json(const json& j, const std::string& path = "");

/// `{"shape": {...}, "state": ["red", ...]}`
json to_json(const GuardedMarking& gm);
GuardedMarking guarded_marking_from_json(const json& j, const std::string& path = "");

/// Flat net fields plus `place_sets` and `transition_spans`, where each span is
/// `{"apex": [...], "left": {s: [states]}, "right": {s: [states]}}` with state
/// lists aligned to the token slots of pre and post.
json to_json(const GuardedNet& gnet);
GuardedNet guarded_net_from_json(const json& j, const std::string& path = "");

/// `{"a": ..., "x": run, "b": ...}`; a run is `{"start", "steps"}` whose steps
/// are transition ids (flat child) or `{"transition", "witness"}` objects.
json to_json(const Witness& w);
Witness witness_from_json(const json& j, const std::string& path = "");
json to_json(const HierExecution& e);
HierExecution hier_execution_from_json(const json& j, const std::string& path = "");
json to_json(const ChildRun& run);
ChildRun child_run_from_json(const json& j, const std::string& path = "");

/// Looks up a child net by name; returns null if unknown.
using NetResolver = std::function<std::shared_ptr<const NetDef>(const std::string&)>;

/// Flat net fields plus `place_sets` and `bindings` of the form
/// `{"child": name, "play": {a: marking}, "stop": {b: marking}}`.
json to_json(const HierarchicalNet& hnet);
HierarchicalNet hierarchical_net_from_json(const json& j, const NetResolver& resolve,
                                           const std::string& path = "");

json to_json(const NetDef& def);

/// Flat net fields plus `"origin": {"places": {id: [place, state]},
/// "transitions": {id: [transition, witness]}}`.
json to_json(const InternalizedNet& inet);

}  // namespace hiernet
