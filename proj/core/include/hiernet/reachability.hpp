#pragma once

#include <cstddef>
#include <map>
#include <optional>

#include "hiernet/petri_net.hpp"

namespace hiernet {

/// Breadth-first search over the firing graph, exploring transitions in
/// declaration order. Returns a shortest execution from `from` to `to` of
/// length at most `max_steps`, or nothing if none exists within the bound.
/// An empty result means "not reachable within the bound", not "unreachable".
std::optional<Execution> reachable_bounded(const PetriNet& net,
                                           const Marking& from,
                                           const Marking& to,
                                           std::size_t max_steps);

/// Every marking reachable from `from` in at most `max_steps` firings, mapped
/// to its shortest distance.
std::map<Marking, std::size_t> reachable_within(const PetriNet& net,
                                                const Marking& from,
                                                std::size_t max_steps);

}  // namespace hiernet
