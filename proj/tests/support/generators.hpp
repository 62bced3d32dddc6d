#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hiernet/finite_span.hpp"
#include "hiernet/guarded_net.hpp"
#include "hiernet/hierarchy.hpp"
#include "hiernet/petri_net.hpp"

namespace hiernet::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  template <class C>
  const auto& pick(const C& items) {
    return items[between(0, items.size() - 1)];
  }

 private:
  std::mt19937_64 gen_;
};

/// Elements `prefix0, prefix1, ...`.
FiniteSet random_set(Rng& rng, std::size_t min_size, std::size_t max_size,
                     const std::string& prefix);

/// Random legs into the given feet; the apex is empty when a foot is.
FiniteSpan random_span(Rng& rng, const FiniteSet& left, const FiniteSet& right,
                       std::size_t max_apex, const std::string& prefix = "s");

struct NetShape {
  std::size_t max_places = 4;
  std::size_t max_transitions = 3;
  std::size_t max_arc_tokens = 2;  // total weight of a pre or post
  bool allow_empty_pre = true;
};

PetriNet random_net(Rng& rng, const NetShape& shape);
Marking random_marking(Rng& rng, const PetriNet& net, std::size_t max_tokens);

struct GuardedShape {
  NetShape net{4, 3, 2, true};
  std::size_t max_states = 3;
  std::size_t max_apex = 4;
};

GuardedNet random_guarded_net(Rng& rng, const GuardedShape& shape = {});
GuardedMarking random_guarded_marking(Rng& rng, const GuardedNet& gnet, std::size_t max_tokens);

struct HierShape {
  std::size_t max_parent_places = 3;
  std::size_t max_parent_transitions = 3;
  std::size_t max_child_places = 3;
  std::size_t max_child_transitions = 3;
  std::size_t max_states = 2;
};

/// Boundary sets stay within `max_states` elements: every parent pre/post
/// holds at most one token.
HierarchicalNet random_hier_net(Rng& rng, const HierShape& shape = {});

/// Identity-like guard on a flat net: one state `*` per place and one witness
/// per transition.
GuardedNet trivial_guard(const PetriNet& net);

}  // namespace hiernet::testing
