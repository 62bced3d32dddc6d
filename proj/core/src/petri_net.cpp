#include "hiernet/petri_net.hpp"

#include <utility>

#include "hiernet/errors.hpp"

namespace hiernet {

namespace {

void check_arcs(const Multiset& arcs, const std::map<std::string, std::size_t, std::less<>>& places,
                const std::string& path) {
  for (const auto& [place, n] : arcs) {
    if (!places.contains(place)) {
      throw ValidationError(path + pointer_token(place),
                            "undeclared place '" + place + "'");
    }
  }
}

}  // namespace

PetriNet::PetriNet(std::vector<std::string> places,
                   std::vector<Transition> transitions)
    : places_(std::move(places)), transitions_(std::move(transitions)) {
  for (std::size_t i = 0; i < places_.size(); ++i) {
    if (!place_index_.emplace(places_[i], i).second) {
      throw ValidationError("/places/" + std::to_string(i),
                            "duplicate place '" + places_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const Transition& t = transitions_[i];
    const std::string path = "/transitions/" + std::to_string(i);
    if (!transition_index_.emplace(t.id, i).second) {
      throw ValidationError(path + "/id", "duplicate transition '" + t.id + "'");
    }
    check_arcs(t.pre, place_index_, path + "/pre");
    check_arcs(t.post, place_index_, path + "/post");
  }
}

bool PetriNet::has_place(std::string_view id) const {
  return place_index_.find(id) != place_index_.end();
}

bool PetriNet::has_transition(std::string_view id) const {
  return transition_index_.find(id) != transition_index_.end();
}

std::optional<std::size_t> PetriNet::place_index(std::string_view id) const {
  auto it = place_index_.find(id);
  if (it == place_index_.end()) return std::nullopt;
  return it->second;
}

const Transition& PetriNet::transition(std::string_view id) const {
  auto it = transition_index_.find(id);
  if (it == transition_index_.end()) throw UnknownIdError("transition", id);
  return transitions_[it->second];
}

void validate_marking(const PetriNet& net, const Marking& m) {
  for (const auto& [place, n] : m) {
    if (!net.has_place(place)) {
      throw ValidationError(pointer_token(place),
                            "marking names undeclared place '" + place + "'");
    }
  }
}

bool enabled(const PetriNet& net, const Marking& m, std::string_view transition) {
  return includes(m, net.transition(transition).pre);
}

Marking fire(const PetriNet& net, const Marking& m, std::string_view transition) {
  const Transition& t = net.transition(transition);
  auto rest = difference(m, t.pre);
  if (!rest) throw NotEnabledError(t.id);
  return sum(*rest, t.post);
}

Marking replay(const PetriNet& net, const Execution& e) {
  Marking m = e.start;
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    const Transition& t = net.transition(e.steps[i]);
    auto rest = difference(m, t.pre);
    if (!rest) throw NotEnabledError(t.id, i);
    m = sum(*rest, t.post);
  }
  return m;
}

}  // namespace hiernet
