#include "hiernet/json_io.hpp"

#include "hiernet/errors.hpp"
#include "hiernet/tuple_id.hpp"

namespace hiernet {

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path + "/" + key, "missing field");
  return *it;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
}

void expect_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
}

const std::string& expect_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  return j.get_ref<const std::string&>();
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  expect_array(j, path);
  std::vector<std::string> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(expect_string(j[i], path + "/" + std::to_string(i)));
  }
  return out;
}

FiniteSet finite_set_from_json(const json& j, const std::string& path) {
  auto elements = string_list(j, path);
  try {
    return FiniteSet(std::move(elements));
  } catch (const ValidationError& e) {
    throw e.prefixed(path);
  }
}

template <class F>
auto located(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ValidationError& e) {
    throw e.prefixed(path);
  }
}

/// Accepts `s` for the one-slot boundary tuple `(s)`.
std::string boundary_key(const std::string& key, const FiniteSet& domain) {
  if (domain.contains(key)) return key;
  std::string wrapped = encode_tuple({key});
  if (domain.contains(wrapped)) return wrapped;
  return key;
}

PlaceSets place_sets_from_json(const json& j, const std::string& path) {
  expect_object(j, path);
  PlaceSets sets;
  for (const auto& [place, elements] : j.items()) {
    sets.emplace(place, finite_set_from_json(elements, path + pointer_token(place)));
  }
  return sets;
}

json place_sets_to_json(const PlaceSets& sets) {
  json out = json::object();
  for (const auto& [place, set] : sets) out[place] = set.elements();
  return out;
}

std::vector<HierStep> hier_steps_from_json(const json& steps, const std::string& path) {
  std::vector<HierStep> out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    out.push_back({expect_string(field(steps[i], "transition", p), p + "/transition"),
                   witness_from_json(field(steps[i], "witness", p), p + "/witness")});
  }
  return out;
}

}  // namespace

json to_json(const Multiset& m) {
  json out = json::object();
  for (const auto& [symbol, n] : m) out[symbol] = n;
  return out;
}

Multiset multiset_from_json(const json& j, const std::string& path) {
  expect_object(j, path);
  Multiset m;
  for (const auto& [symbol, n] : j.items()) {
    if (!n.is_number_integer() || n.get<std::int64_t>() < 0) {
      throw ValidationError(path + pointer_token(symbol), "expected a non-negative integer");
    }
    m.add(symbol, n.get<Multiset::Count>());
  }
  return m;
}

json to_json(const PetriNet& net) {
  json transitions = json::array();
  for (const auto& t : net.transitions()) {
    transitions.push_back({{"id", t.id}, {"pre", to_json(t.pre)}, {"post", to_json(t.post)}});
  }
  return {{"places", net.places()}, {"transitions", std::move(transitions)}};
}

PetriNet petri_net_from_json(const json& j, const std::string& path) {
  auto places = string_list(field(j, "places", path), path + "/places");
  const json& ts = field(j, "transitions", path);
  expect_array(ts, path + "/transitions");
  std::vector<Transition> transitions;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string p = path + "/transitions/" + std::to_string(i);
    Transition t;
    t.id = expect_string(field(ts[i], "id", p), p + "/id");
    t.pre = ts[i].contains("pre") ? multiset_from_json(ts[i]["pre"], p + "/pre") : Multiset{};
    t.post = ts[i].contains("post") ? multiset_from_json(ts[i]["post"], p + "/post") : Multiset{};
    transitions.push_back(std::move(t));
  }
  return located(path, [&] { return PetriNet(std::move(places), std::move(transitions)); });
}

json to_json(const Execution& e) {
  return {{"start", to_json(e.start)}, {"steps", e.steps}};
}

Execution execution_from_json(const json& j, const std::string& path) {
  Execution e;
  e.start = multiset_from_json(field(j, "start", path), path + "/start");
  e.steps = string_list(field(j, "steps", path), path + "/steps");
  return e;
}

json to_json(const GuardedMarking& gm) {
  return {{"shape", to_json(gm.shape)}, {"state", gm.state}};
}

GuardedMarking guarded_marking_from_json(const json& j, const std::string& path) {
  GuardedMarking gm;
  gm.shape = multiset_from_json(field(j, "shape", path), path + "/shape");
  gm.state = string_list(field(j, "state", path), path + "/state");
  return gm;
}

json to_json(const GuardedNet& gnet) {
  json out = to_json(gnet.base());
  out["place_sets"] = place_sets_to_json(gnet.place_sets());
  json spans = json::object();
  for (const auto& [id, span] : gnet.spans()) {
    json left = json::object(), right = json::object();
    for (const auto& s : span.apex()) {
      left[s] = decode_tuple(span.left_of(s));
      right[s] = decode_tuple(span.right_of(s));
    }
    spans[id] = {{"apex", span.apex().elements()}, {"left", left}, {"right", right}};
  }
  out["transition_spans"] = std::move(spans);
  return out;
}

GuardedNet guarded_net_from_json(const json& j, const std::string& path) {
  PetriNet base = petri_net_from_json(j, path);
  PlaceSets sets = place_sets_from_json(field(j, "place_sets", path), path + "/place_sets");
  located(path, [&] {
    validate_place_sets(base, sets);
    return 0;
  });

  const std::string spans_path = path + "/transition_spans";
  const json& js = field(j, "transition_spans", path);
  expect_object(js, spans_path);
  GuardedNet::Spans spans;
  for (const auto& [id, body] : js.items()) {
    const std::string p = spans_path + pointer_token(id);
    if (!base.has_transition(id)) throw ValidationError(p, "undeclared transition '" + id + "'");
    const Transition& t = base.transition(id);
    FiniteSet apex = finite_set_from_json(field(body, "apex", p), p + "/apex");
    FiniteSpan::Leg left, right;
    for (const char* side : {"left", "right"}) {
      const json& leg = field(body, side, p);
      expect_object(leg, p + "/" + side);
      auto& target = std::string_view(side) == "left" ? left : right;
      for (const auto& [s, states] : leg.items()) {
        target.emplace(s, encode_tuple(string_list(states, p + "/" + side + pointer_token(s))));
      }
    }
    spans.emplace(id, located(p, [&] {
                    return FiniteSpan(eval_object(base, sets, t.pre), std::move(apex),
                                      eval_object(base, sets, t.post), std::move(left),
                                      std::move(right));
                  }));
  }
  return located(path, [&] { return GuardedNet(std::move(base), std::move(sets), std::move(spans)); });
}

json to_json(const ChildRun& run) {
  return std::visit([](const auto& r) { return to_json(r); }, run);
}

ChildRun child_run_from_json(const json& j, const std::string& path) {
  const json& steps = field(j, "steps", path);
  expect_array(steps, path + "/steps");
  const bool witnessed = !steps.empty() && steps.front().is_object();
  if (!witnessed) return execution_from_json(j, path);
  return hier_execution_from_json(j, path);
}

json to_json(const Witness& w) {
  return {{"a", w.a}, {"x", to_json(w.x)}, {"b", w.b}};
}

Witness witness_from_json(const json& j, const std::string& path) {
  Witness w;
  w.a = expect_string(field(j, "a", path), path + "/a");
  w.x = child_run_from_json(field(j, "x", path), path + "/x");
  w.b = expect_string(field(j, "b", path), path + "/b");
  return w;
}

json to_json(const HierExecution& e) {
  json steps = json::array();
  for (const auto& step : e.steps) {
    steps.push_back({{"transition", step.transition}, {"witness", to_json(step.witness)}});
  }
  return {{"start", to_json(e.start)}, {"steps", std::move(steps)}};
}

HierExecution hier_execution_from_json(const json& j, const std::string& path) {
  HierExecution e;
  e.start = multiset_from_json(field(j, "start", path), path + "/start");
  const json& steps = field(j, "steps", path);
  expect_array(steps, path + "/steps");
  e.steps = hier_steps_from_json(steps, path + "/steps");
  return e;
}

json to_json(const HierarchicalNet& hnet) {
  json out = to_json(hnet.parent());
  out["place_sets"] = place_sets_to_json(hnet.place_sets());
  json bindings = json::object();
  for (const auto& [id, b] : hnet.bindings()) {
    json play = json::object(), stop = json::object();
    for (const auto& [a, m] : b.play) play[a] = to_json(m);
    for (const auto& [s, m] : b.stop) stop[s] = to_json(m);
    bindings[id] = {{"child", b.child_name}, {"play", play}, {"stop", stop}};
  }
  out["bindings"] = std::move(bindings);
  return out;
}

HierarchicalNet hierarchical_net_from_json(const json& j, const NetResolver& resolve,
                                           const std::string& path) {
  PetriNet parent = petri_net_from_json(j, path);
  PlaceSets sets = place_sets_from_json(field(j, "place_sets", path), path + "/place_sets");
  located(path, [&] {
    validate_place_sets(parent, sets);
    return 0;
  });

  const std::string bindings_path = path + "/bindings";
  const json& jb = field(j, "bindings", path);
  expect_object(jb, bindings_path);
  HierarchicalNet::Bindings bindings;
  for (const auto& [id, body] : jb.items()) {
    const std::string p = bindings_path + pointer_token(id);
    if (!parent.has_transition(id)) throw ValidationError(p, "undeclared transition '" + id + "'");
    const Transition& t = parent.transition(id);
    ChildBinding b;
    b.child_name = expect_string(field(body, "child", p), p + "/child");
    b.child = resolve(b.child_name);
    if (!b.child) throw ValidationError(p + "/child", "unknown child net '" + b.child_name + "'");

    auto read_table = [&](const char* side, const Multiset& boundary, auto& table) {
      const std::string tp = p + "/" + side;
      const json& jt = field(body, side, p);
      expect_object(jt, tp);
      const FiniteSet domain = eval_object(parent, sets, boundary);
      for (const auto& [key, marking] : jt.items()) {
        table.emplace(boundary_key(key, domain),
                      multiset_from_json(marking, tp + pointer_token(key)));
      }
    };
    read_table("play", t.pre, b.play);
    read_table("stop", t.post, b.stop);
    bindings.emplace(id, std::move(b));
  }
  return located(path, [&] {
    return HierarchicalNet(std::move(parent), std::move(sets), std::move(bindings));
  });
}

json to_json(const NetDef& def) {
  return std::visit([](const auto& net) { return to_json(net); }, def.value());
}

json to_json(const InternalizedNet& inet) {
  json out = to_json(inet.net);
  json places = json::object(), transitions = json::object();
  for (const auto& [id, origin] : inet.place_origin) places[id] = {origin.first, origin.second};
  for (const auto& [id, origin] : inet.transition_origin) {
    transitions[id] = {origin.first, origin.second};
  }
  out["origin"] = {{"places", std::move(places)}, {"transitions", std::move(transitions)}};
  return out;
}

}  // namespace hiernet
