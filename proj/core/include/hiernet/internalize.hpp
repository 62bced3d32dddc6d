#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hiernet/guarded_net.hpp"
#include "hiernet/hierarchy.hpp"
#include "hiernet/petri_net.hpp"

namespace hiernet {

/// A flat net compiled from a net with state sets and spans: one place per
/// (place, state) pair and one transition per (transition, apex element) pair.
/// The origin tables project generated ids back onto the source net.
struct InternalizedNet {
  using Origin = std::map<std::string, std::pair<std::string, std::string>, std::less<>>;

  PetriNet net;
  Origin place_origin;
  Origin transition_origin;
};

/// Generated ids are `outer@inner`, e.g. `A@red` or `f@s1`.
std::string internal_id(std::string_view outer, std::string_view inner);

InternalizedNet internalize_guarded(const GuardedNet& gnet);

/// Internalizes a hierarchical net whose children are flat, promoting every
/// child run of length <= max_child_steps to a transition. Growing the bound
/// only adds transitions; ids do not depend on it.
InternalizedNet internalize_hier(const HierarchicalNet& hnet, std::size_t max_child_steps);

/// Maps an internal marking onto the source net by forgetting states.
Marking project_marking(const InternalizedNet& inet, const Marking& m);

/// Maps every internal step to its source transition. Throws NotEnabledError
/// if `e` does not replay on the internalized net.
Execution project(const InternalizedNet& inet, const Execution& e);

/// One token on `place@state` per token of the guarded marking.
Marking encode_marking(const PetriNet& source, const GuardedMarking& gm);

struct WitnessedStep {
  std::string transition;
  std::string witness;

  friend bool operator==(const WitnessedStep&, const WitnessedStep&) = default;
};

struct GuardedRun {
  Execution internal;
  std::vector<WitnessedStep> steps;
};

/// Shortest witnessed run between guarded markings of length <= max_steps,
/// found by searching the internalized net.
std::optional<GuardedRun> lift_reachability(const GuardedNet& gnet, const GuardedMarking& from,
                                            const GuardedMarking& to, std::size_t max_steps);

}  // namespace hiernet
