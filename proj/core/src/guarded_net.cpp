#include "hiernet/guarded_net.hpp"

#include "hiernet/tuple_id.hpp"

namespace hiernet {

std::vector<std::string> token_slots(const PetriNet& net, const Multiset& m) {
  std::vector<std::string> slots;
  slots.reserve(m.total());
  for (const auto& place : net.places()) {
    for (Multiset::Count i = 0, n = m.count(place); i < n; ++i) slots.push_back(place);
  }
  return slots;
}

FiniteSet eval_object(const PetriNet& net, const PlaceSets& sets, const Multiset& m) {
  validate_marking(net, m);
  std::vector<const FiniteSet*> factors;
  for (const auto& place : token_slots(net, m)) {
    auto it = sets.find(place);
    if (it == sets.end()) throw UnknownIdError("place set", place);
    if (it->second.empty()) return FiniteSet();
    factors.push_back(&it->second);
  }

  // Odometer over the factors; the last slot varies fastest.
  std::vector<std::string> elements;
  std::vector<std::size_t> digit(factors.size(), 0);
  std::vector<std::string> tuple(factors.size());
  while (true) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      tuple[i] = factors[i]->elements()[digit[i]];
    }
    elements.push_back(encode_tuple(tuple));
    std::size_t pos = factors.size();
    while (pos > 0) {
      --pos;
      if (++digit[pos] < factors[pos]->size()) break;
      digit[pos] = 0;
      if (pos == 0) return FiniteSet(std::move(elements));
    }
    if (factors.empty()) return FiniteSet(std::move(elements));
  }
}

void validate_place_sets(const PetriNet& net, const PlaceSets& sets) {
  for (const auto& place : net.places()) {
    if (!sets.contains(place)) {
      throw ValidationError("/place_sets" + pointer_token(place),
                            "place '" + place + "' has no state set");
    }
  }
  for (const auto& [place, _] : sets) {
    if (!net.has_place(place)) {
      throw ValidationError("/place_sets" + pointer_token(place),
                            "state set for undeclared place '" + place + "'");
    }
  }
}

GuardedNet::GuardedNet(PetriNet base, PlaceSets place_sets, Spans transition_spans)
    : base_(std::move(base)),
      place_sets_(std::move(place_sets)),
      spans_(std::move(transition_spans)) {
  validate_place_sets(base_, place_sets_);
  for (const auto& t : base_.transitions()) {
    const std::string path = "/transition_spans" + pointer_token(t.id);
    auto it = spans_.find(t.id);
    if (it == spans_.end()) {
      throw ValidationError(path, "transition '" + t.id + "' has no span");
    }
    if (!same_elements(it->second.left_foot(), eval_object(base_, place_sets_, t.pre))) {
      throw ValidationError(path + "/left",
                            "left foot differs from the states of the precondition");
    }
    if (!same_elements(it->second.right_foot(), eval_object(base_, place_sets_, t.post))) {
      throw ValidationError(path + "/right",
                            "right foot differs from the states of the postcondition");
    }
  }
  for (const auto& [id, _] : spans_) {
    if (!base_.has_transition(id)) {
      throw ValidationError("/transition_spans" + pointer_token(id),
                            "span for undeclared transition '" + id + "'");
    }
  }
}

const FiniteSpan& GuardedNet::span(std::string_view transition) const {
  auto it = spans_.find(transition);
  if (it == spans_.end()) throw UnknownIdError("transition", transition);
  return it->second;
}

FiniteSet eval_object(const GuardedNet& gnet, const Multiset& m) {
  return eval_object(gnet.base(), gnet.place_sets(), m);
}

void validate_guarded_marking(const PetriNet& net, const PlaceSets& sets,
                              const GuardedMarking& gm) {
  validate_marking(net, gm.shape);
  const auto slots = token_slots(net, gm.shape);
  if (slots.size() != gm.state.size()) {
    throw ValidationError("/state", "expected " + std::to_string(slots.size()) +
                                        " token states, got " +
                                        std::to_string(gm.state.size()));
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto it = sets.find(slots[i]);
    if (it == sets.end() || !it->second.contains(gm.state[i])) {
      throw ValidationError("/state/" + std::to_string(i),
                            "state '" + gm.state[i] + "' is not in the set of place '" +
                                slots[i] + "'");
    }
  }
}

TokenSplit split_tokens(const PetriNet& net, const Marking& shape,
                        std::span<const std::string> state, const Multiset& taken) {
  TokenSplit out;
  std::size_t offset = 0;
  for (const auto& place : net.places()) {
    const auto n = shape.count(place);
    const auto k = taken.count(place);
    if (k > n || offset + n > state.size()) {
      throw Error("token split exceeds the tokens on place '" + place + "'");
    }
    out.taken.insert(out.taken.end(), state.begin() + offset, state.begin() + offset + k);
    out.rest.insert(out.rest.end(), state.begin() + offset + k, state.begin() + offset + n);
    offset += n;
  }
  return out;
}

std::vector<std::string> merge_tokens(const PetriNet& net, const Marking& older_shape,
                                      std::span<const std::string> older,
                                      const Multiset& newer_shape,
                                      std::span<const std::string> newer) {
  std::vector<std::string> out;
  out.reserve(older.size() + newer.size());
  std::size_t a = 0, b = 0;
  for (const auto& place : net.places()) {
    const auto na = older_shape.count(place);
    const auto nb = newer_shape.count(place);
    if (a + na > older.size() || b + nb > newer.size()) {
      throw Error("token merge has fewer states than its shapes require");
    }
    out.insert(out.end(), older.begin() + a, older.begin() + a + na);
    out.insert(out.end(), newer.begin() + b, newer.begin() + b + nb);
    a += na;
    b += nb;
  }
  return out;
}

WitnessMismatchError::WitnessMismatchError(std::string transition, std::string witness,
                                           std::string why)
    : Error("witness '" + witness + "' cannot fire '" + transition + "': " + why),
      transition_(std::move(transition)),
      witness_(std::move(witness)) {}

GuardedMarking guarded_fire(const GuardedNet& gnet, const GuardedMarking& gm,
                            std::string_view transition, std::string_view witness) {
  const Transition& t = gnet.base().transition(transition);
  auto rest_shape = difference(gm.shape, t.pre);
  if (!rest_shape) throw NotEnabledError(t.id);

  const FiniteSpan& span = gnet.span(t.id);
  if (!span.apex().contains(witness)) {
    throw WitnessMismatchError(t.id, std::string(witness), "not a path of this transition");
  }
  auto split = split_tokens(gnet.base(), gm.shape, gm.state, t.pre);
  const std::string consumed = encode_tuple(split.taken);
  if (consumed != span.left_of(witness)) {
    throw WitnessMismatchError(t.id, std::string(witness),
                               "consumed states " + consumed + " but the path starts at " +
                                   span.left_of(witness));
  }
  const auto produced = decode_tuple(span.right_of(witness));
  GuardedMarking next;
  next.state = merge_tokens(gnet.base(), *rest_shape, split.rest, t.post, produced);
  next.shape = sum(*rest_shape, t.post);
  return next;
}

namespace {

/// One step's span between eval_object(before) and eval_object(after).
FiniteSpan step_span(const GuardedNet& gnet, const Marking& before, const Transition& t) {
  const FiniteSpan& guard = gnet.span(t.id);
  const Marking rest = *difference(before, t.pre);
  if (rest.empty()) return guard;

  const FiniteSpan padded = tensor_spans(guard, identity_span(eval_object(gnet, rest)));
  const PetriNet& net = gnet.base();

  std::map<std::string, std::string, std::less<>> left_image, right_image;
  for (const auto& e : padded.left_foot()) {
    auto pair = decode_tuple(e);
    left_image.emplace(e, encode_tuple(merge_tokens(net, t.pre, decode_tuple(pair[0]), rest,
                                                    decode_tuple(pair[1]))));
  }
  for (const auto& e : padded.right_foot()) {
    auto pair = decode_tuple(e);
    right_image.emplace(e, encode_tuple(merge_tokens(net, rest, decode_tuple(pair[1]), t.post,
                                                     decode_tuple(pair[0]))));
  }
  FiniteSpan::Leg left, right;
  for (const auto& s : padded.apex()) {
    left.emplace(s, left_image.at(padded.left_of(s)));
    right.emplace(s, right_image.at(padded.right_of(s)));
  }
  return FiniteSpan(eval_object(gnet, before), padded.apex(),
                    eval_object(gnet, sum(rest, t.post)), std::move(left), std::move(right));
}

}  // namespace

FiniteSpan eval_execution(const GuardedNet& gnet, const Execution& e) {
  replay(gnet.base(), e);
  if (e.steps.empty()) return identity_span(eval_object(gnet, e.start));

  Marking current = e.start;
  std::optional<FiniteSpan> acc;
  for (const auto& id : e.steps) {
    const Transition& t = gnet.base().transition(id);
    FiniteSpan step = step_span(gnet, current, t);
    acc = acc ? compose_spans(*acc, step) : std::move(step);
    current = fire(gnet.base(), current, id);
  }
  return *acc;
}

}  // namespace hiernet
