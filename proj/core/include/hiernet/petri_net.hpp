#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hiernet/multiset.hpp"

namespace hiernet {

/// A marking is a multiset over the places of one particular net.
using Marking = Multiset;

struct Transition {
  std::string id;
  Multiset pre;
  Multiset post;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Place/transition net. Places and transitions keep their declaration order,
/// which fixes the canonical token order and the search order used elsewhere.
class PetriNet {
 public:
  PetriNet() = default;
  /// Throws ValidationError if ids repeat or an arc names an undeclared place.
  PetriNet(std::vector<std::string> places, std::vector<Transition> transitions);

  const std::vector<std::string>& places() const noexcept { return places_; }
  const std::vector<Transition>& transitions() const noexcept {
    return transitions_;
  }

  bool has_place(std::string_view id) const;
  bool has_transition(std::string_view id) const;
  std::optional<std::size_t> place_index(std::string_view id) const;

  /// Throws UnknownIdError.
  const Transition& transition(std::string_view id) const;

  friend bool operator==(const PetriNet& a, const PetriNet& b) {
    return a.places_ == b.places_ && a.transitions_ == b.transitions_;
  }

 private:
  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::map<std::string, std::size_t, std::less<>> place_index_;
  std::map<std::string, std::size_t, std::less<>> transition_index_;
};

/// A replayable firing sequence.
struct Execution {
  Marking start;
  std::vector<std::string> steps;

  friend bool operator==(const Execution&, const Execution&) = default;
};

/// Throws ValidationError if `m` puts tokens on a place the net lacks.
void validate_marking(const PetriNet& net, const Marking& m);

bool enabled(const PetriNet& net, const Marking& m, std::string_view transition);

/// `m - pre(t) + post(t)`. Throws NotEnabledError.
Marking fire(const PetriNet& net, const Marking& m, std::string_view transition);

/// Folds `fire` over the steps. Throws NotEnabledError carrying the index of
/// the first step that cannot fire.
Marking replay(const PetriNet& net, const Execution& e);

}  // namespace hiernet
