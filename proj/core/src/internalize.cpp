#include "hiernet/internalize.hpp"

#include "hiernet/reachability.hpp"
#include "hiernet/tuple_id.hpp"

namespace hiernet {

namespace {

Multiset internal_arcs(const std::vector<std::string>& slots, const std::string& tuple) {
  const auto states = decode_tuple(tuple);
  Multiset arcs;
  for (std::size_t i = 0; i < slots.size(); ++i) arcs.add(internal_id(slots[i], states.at(i)));
  return arcs;
}

InternalizedNet internalize(const PetriNet& base, const PlaceSets& sets,
                            const std::map<std::string, FiniteSpan, std::less<>>& spans) {
  InternalizedNet out;
  std::vector<std::string> places;
  for (const auto& place : base.places()) {
    for (const auto& state : sets.at(place)) {
      std::string id = internal_id(place, state);
      if (!out.place_origin.emplace(id, std::pair{place, state}).second) {
        throw ValidationError("/places", "generated place id '" + id + "' is ambiguous");
      }
      places.push_back(std::move(id));
    }
  }
  std::vector<Transition> transitions;
  for (const auto& t : base.transitions()) {
    const FiniteSpan& span = spans.at(t.id);
    const auto pre_slots = token_slots(base, t.pre);
    const auto post_slots = token_slots(base, t.post);
    for (const auto& s : span.apex()) {
      std::string id = internal_id(t.id, s);
      if (!out.transition_origin.emplace(id, std::pair{t.id, s}).second) {
        throw ValidationError("/transitions", "generated transition id '" + id + "' is ambiguous");
      }
      transitions.push_back({std::move(id), internal_arcs(pre_slots, span.left_of(s)),
                             internal_arcs(post_slots, span.right_of(s))});
    }
  }
  out.net = PetriNet(std::move(places), std::move(transitions));
  return out;
}

}  // namespace

std::string internal_id(std::string_view outer, std::string_view inner) {
  std::string id(outer);
  id.push_back('@');
  id.append(inner);
  return id;
}

InternalizedNet internalize_guarded(const GuardedNet& gnet) {
  return internalize(gnet.base(), gnet.place_sets(), gnet.spans());
}

InternalizedNet internalize_hier(const HierarchicalNet& hnet, std::size_t max_child_steps) {
  std::map<std::string, FiniteSpan, std::less<>> spans;
  for (const auto& t : hnet.parent().transitions()) {
    spans.emplace(t.id, as_span(hnet, t.id, max_child_steps));
  }
  return internalize(hnet.parent(), hnet.place_sets(), spans);
}

Marking project_marking(const InternalizedNet& inet, const Marking& m) {
  Marking out;
  for (const auto& [place, n] : m) {
    auto it = inet.place_origin.find(place);
    if (it == inet.place_origin.end()) throw UnknownIdError("internal place", place);
    out.add(it->second.first, n);
  }
  return out;
}

Execution project(const InternalizedNet& inet, const Execution& e) {
  replay(inet.net, e);
  Execution out{project_marking(inet, e.start), {}};
  out.steps.reserve(e.steps.size());
  for (const auto& step : e.steps) out.steps.push_back(inet.transition_origin.at(step).first);
  return out;
}

Marking encode_marking(const PetriNet& source, const GuardedMarking& gm) {
  const auto slots = token_slots(source, gm.shape);
  if (slots.size() != gm.state.size()) {
    throw ValidationError("/state", "token states do not match the marking");
  }
  Marking out;
  for (std::size_t i = 0; i < slots.size(); ++i) out.add(internal_id(slots[i], gm.state[i]));
  return out;
}

std::optional<GuardedRun> lift_reachability(const GuardedNet& gnet, const GuardedMarking& from,
                                            const GuardedMarking& to, std::size_t max_steps) {
  validate_guarded_marking(gnet.base(), gnet.place_sets(), from);
  validate_guarded_marking(gnet.base(), gnet.place_sets(), to);
  const InternalizedNet inet = internalize_guarded(gnet);
  auto found = reachable_bounded(inet.net, encode_marking(gnet.base(), from),
                                 encode_marking(gnet.base(), to), max_steps);
  if (!found) return std::nullopt;
  GuardedRun run{std::move(*found), {}};
  for (const auto& step : run.internal.steps) {
    const auto& [transition, witness] = inet.transition_origin.at(step);
    run.steps.push_back({transition, witness});
  }
  return run;
}

}  // namespace hiernet
