#pragma once

#include <compare>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiernet/errors.hpp"
#include "hiernet/finite_span.hpp"
#include "hiernet/petri_net.hpp"

namespace hiernet {

/// The state set attached to each place.
using PlaceSets = std::map<std::string, FiniteSet, std::less<>>;

/// Places of `m` listed with multiplicity, in place declaration order. Slot i
/// of every tuple in `eval_object(m)` belongs to the token on `token_slots(m)[i]`.
std::vector<std::string> token_slots(const PetriNet& net, const Multiset& m);

/// Product of the place sets over the token slots of `m`, enumerated
/// lexicographically. Elements are tuple ids; `{}` maps to `{()}`.
/// Throws UnknownIdError if `m` names a place without a state set.
FiniteSet eval_object(const PetriNet& net, const PlaceSets& sets, const Multiset& m);

/// Checks that `sets` assigns exactly one set to every place of `net`.
void validate_place_sets(const PetriNet& net, const PlaceSets& sets);

/// A Petri net whose places carry finite state sets and whose transitions
/// carry spans between the state tuples of their pre- and postconditions.
class GuardedNet {
 public:
  using Spans = std::map<std::string, FiniteSpan, std::less<>>;

  GuardedNet() = default;
  /// Throws ValidationError unless every transition has a span whose feet are
  /// eval_object(pre) and eval_object(post).
  GuardedNet(PetriNet base, PlaceSets place_sets, Spans transition_spans);

  const PetriNet& base() const noexcept { return base_; }
  const PlaceSets& place_sets() const noexcept { return place_sets_; }
  const Spans& spans() const noexcept { return spans_; }
  const FiniteSpan& span(std::string_view transition) const;

 private:
  PetriNet base_;
  PlaceSets place_sets_;
  Spans spans_;
};

FiniteSet eval_object(const GuardedNet& gnet, const Multiset& m);

/// A marking together with one state per token. Tokens are laid out by place
/// declaration order, and within a place oldest first.
struct GuardedMarking {
  Marking shape;
  std::vector<std::string> state;

  friend bool operator==(const GuardedMarking&, const GuardedMarking&) = default;
  friend auto operator<=>(const GuardedMarking&, const GuardedMarking&) = default;
};

void validate_guarded_marking(const PetriNet& net, const PlaceSets& sets,
                              const GuardedMarking& gm);

/// Token states split into the tokens `taken` removes (oldest per place, slot
/// order) and the remaining tokens (canonical layout of `shape - taken`).
struct TokenSplit {
  std::vector<std::string> taken;
  std::vector<std::string> rest;
};

/// Requires `taken <= shape`.
TokenSplit split_tokens(const PetriNet& net, const Marking& shape,
                        std::span<const std::string> state, const Multiset& taken);

/// Canonical layout of `older_shape + newer_shape` where, within each place,
/// the tokens of `older` come first.
std::vector<std::string> merge_tokens(const PetriNet& net, const Marking& older_shape,
                                      std::span<const std::string> older,
                                      const Multiset& newer_shape,
                                      std::span<const std::string> newer);

/// The consumed token states do not match the left leg of the witness, or the
/// witness is not an apex element of the transition's span.
class WitnessMismatchError : public Error {
 public:
  WitnessMismatchError(std::string transition, std::string witness, std::string why);

  const std::string& transition() const noexcept { return transition_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string transition_;
  std::string witness_;
};

/// Fires `transition` using apex element `witness`: the oldest tokens of each
/// input place are consumed and must carry the states `left_leg(witness)`;
/// produced tokens are appended with the states `right_leg(witness)`.
/// Throws NotEnabledError or WitnessMismatchError.
GuardedMarking guarded_fire(const GuardedNet& gnet, const GuardedMarking& gm,
                            std::string_view transition, std::string_view witness);

/// The span `eval_object(start) <- S -> eval_object(end)` of an execution:
/// each step's span tensored with identities on the untouched tokens, composed
/// in order. Throws NotEnabledError if the execution does not replay.
FiniteSpan eval_execution(const GuardedNet& gnet, const Execution& e);

}  // namespace hiernet
