#include "hiernet/hierarchy.hpp"

#include "hiernet/tuple_id.hpp"

namespace hiernet {

namespace {

using Reason = HierarchyError::Reason;

void check_boundary_table(const std::map<std::string, Marking, std::less<>>& table,
                          const FiniteSet& domain, const PetriNet& child,
                          const std::string& path) {
  for (const auto& element : domain) {
    if (!table.contains(element)) {
      throw ValidationError(path + pointer_token(element),
                            "no child marking for boundary state '" + element + "'");
    }
  }
  for (const auto& [element, marking] : table) {
    if (!domain.contains(element)) {
      throw ValidationError(path + pointer_token(element),
                            "'" + element + "' is not a boundary state of this transition");
    }
    try {
      validate_marking(child, marking);
    } catch (const ValidationError& e) {
      throw e.prefixed(path + pointer_token(element));
    }
  }
}

HierExecution as_hier_run(const ChildRun& run, const std::string& transition) {
  if (const auto* h = std::get_if<HierExecution>(&run)) return *h;
  const auto& flat = std::get<Execution>(run);
  if (!flat.steps.empty()) {
    throw HierarchyError(Reason::ChildRunInvalid, transition,
                         "hierarchical child needs witnessed steps", 0);
  }
  return HierExecution{flat.start, {}};
}

/// Replays the child run and returns its end marking.
Marking run_child(const ChildBinding& binding, const ChildRun& run,
                  const std::string& transition) {
  const NetDef& child = *binding.child;
  if (child.is_flat()) {
    const auto* exec = std::get_if<Execution>(&run);
    if (!exec) {
      throw HierarchyError(Reason::ChildRunInvalid, transition,
                           "child '" + binding.child_name + "' is flat but the run is witnessed",
                           0);
    }
    const PetriNet& net = child.flat();
    Marking m = exec->start;
    for (std::size_t i = 0; i < exec->steps.size(); ++i) {
      const std::string& id = exec->steps[i];
      if (!net.has_transition(id)) {
        throw HierarchyError(Reason::ChildRunInvalid, transition,
                             "child has no transition '" + id + "'", i);
      }
      auto rest = difference(m, net.transition(id).pre);
      if (!rest) {
        throw HierarchyError(Reason::ChildRunInvalid, transition,
                             "child transition '" + id + "' is not enabled at " + to_string(m),
                             i);
      }
      m = sum(*rest, net.transition(id).post);
    }
    return m;
  }
  if (child.is_hierarchical()) {
    try {
      return hier_replay(child.hierarchical(), as_hier_run(run, transition));
    } catch (const HierarchyError& inner) {
      if (inner.transition() == transition && !inner.parent_step()) throw;
      throw HierarchyError(Reason::ChildRunInvalid, transition,
                           std::string("nested: ") + inner.what(),
                           inner.parent_step().value_or(0));
    }
  }
  throw HierarchyError(Reason::UnsupportedChild, transition,
                       "child '" + binding.child_name + "' is a guarded net");
}

}  // namespace

HierarchicalNet::HierarchicalNet(PetriNet parent, PlaceSets place_sets, Bindings bindings)
    : parent_(std::move(parent)),
      place_sets_(std::move(place_sets)),
      bindings_(std::move(bindings)) {
  validate_place_sets(parent_, place_sets_);
  for (const auto& t : parent_.transitions()) {
    const std::string path = "/bindings" + pointer_token(t.id);
    auto it = bindings_.find(t.id);
    if (it == bindings_.end()) {
      throw ValidationError(path, "transition '" + t.id + "' has no child binding");
    }
    const ChildBinding& b = it->second;
    if (!b.child) throw ValidationError(path + "/child", "unresolved child net");
    if (b.child->is_guarded()) {
      throw ValidationError(path + "/child",
                            "child '" + b.child_name + "' must be flat or hierarchical");
    }
    const PetriNet& child_shape = b.child->shape();
    check_boundary_table(b.play, eval_object(parent_, place_sets_, t.pre), child_shape,
                         path + "/play");
    check_boundary_table(b.stop, eval_object(parent_, place_sets_, t.post), child_shape,
                         path + "/stop");
  }
  for (const auto& [id, _] : bindings_) {
    if (!parent_.has_transition(id)) {
      throw ValidationError("/bindings" + pointer_token(id),
                            "binding for undeclared transition '" + id + "'");
    }
  }
}

const ChildBinding& HierarchicalNet::binding(std::string_view transition) const {
  auto it = bindings_.find(transition);
  if (it == bindings_.end()) throw UnknownIdError("transition", transition);
  return it->second;
}

const PetriNet& NetDef::shape() const {
  return std::visit(
      [](const auto& net) -> const PetriNet& {
        using T = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<T, PetriNet>) {
          return net;
        } else if constexpr (std::is_same_v<T, GuardedNet>) {
          return net.base();
        } else {
          return net.parent();
        }
      },
      value_);
}

const Marking& run_start(const ChildRun& run) {
  return std::visit([](const auto& r) -> const Marking& { return r.start; }, run);
}

std::string_view to_string(HierarchyError::Reason reason) {
  switch (reason) {
    case Reason::NotEnabled: return "NotEnabled";
    case Reason::InvalidBoundaryState: return "InvalidBoundaryState";
    case Reason::ChildRunInvalid: return "ChildRunInvalid";
    case Reason::BoundaryMismatch: return "BoundaryMismatch";
    case Reason::UnsupportedChild: return "UnsupportedChild";
  }
  return "Unknown";
}

HierarchyError::HierarchyError(Reason reason, std::string transition, std::string detail,
                               std::optional<std::size_t> child_step, std::optional<Side> side)
    : Error(std::string(hiernet::to_string(reason)) + " on '" + transition + "': " + detail),
      reason_(reason),
      transition_(std::move(transition)),
      detail_(std::move(detail)),
      child_step_(child_step),
      side_(side) {}

HierarchyError HierarchyError::at_parent_step(std::size_t index) const {
  HierarchyError copy(reason_, transition_, "step " + std::to_string(index) + ": " + detail_,
                      child_step_, side_);
  copy.parent_step_ = index;
  return copy;
}

Marking hier_fire(const HierarchicalNet& hnet, const Marking& m, std::string_view transition,
                  const Witness& w) {
  const Transition& t = hnet.parent().transition(transition);
  if (!includes(m, t.pre)) {
    throw HierarchyError(Reason::NotEnabled, t.id, "precondition not covered by " + to_string(m));
  }
  const ChildBinding& binding = hnet.binding(t.id);
  auto play = binding.play.find(w.a);
  if (play == binding.play.end()) {
    throw HierarchyError(Reason::InvalidBoundaryState, t.id,
                         "'" + w.a + "' is not an input boundary state");
  }
  auto stop = binding.stop.find(w.b);
  if (stop == binding.stop.end()) {
    throw HierarchyError(Reason::InvalidBoundaryState, t.id,
                         "'" + w.b + "' is not an output boundary state");
  }
  if (run_start(w.x) != play->second) {
    throw HierarchyError(Reason::BoundaryMismatch, t.id,
                         "child run starts at " + to_string(run_start(w.x)) + ", play gives " +
                             to_string(play->second),
                         std::nullopt, HierarchyError::Side::Play);
  }
  const Marking end = run_child(binding, w.x, t.id);
  if (end != stop->second) {
    throw HierarchyError(Reason::BoundaryMismatch, t.id,
                         "child run ends at " + to_string(end) + ", stop gives " +
                             to_string(stop->second),
                         std::nullopt, HierarchyError::Side::Stop);
  }
  return fire(hnet.parent(), m, t.id);
}

GuardedMarking hier_fire(const HierarchicalNet& hnet, const GuardedMarking& gm,
                         std::string_view transition, const Witness& w) {
  const Transition& t = hnet.parent().transition(transition);
  if (!includes(gm.shape, t.pre)) {
    throw HierarchyError(Reason::NotEnabled, t.id,
                         "precondition not covered by " + to_string(gm.shape));
  }
  auto split = split_tokens(hnet.parent(), gm.shape, gm.state, t.pre);
  if (encode_tuple(split.taken) != w.a) {
    throw HierarchyError(Reason::InvalidBoundaryState, t.id,
                         "consumed tokens carry " + encode_tuple(split.taken) + ", not " + w.a);
  }
  GuardedMarking next;
  next.shape = hier_fire(hnet, gm.shape, transition, w);
  const Marking rest = *difference(gm.shape, t.pre);
  next.state = merge_tokens(hnet.parent(), rest, split.rest, t.post, decode_tuple(w.b));
  return next;
}

namespace {

std::string canonical_key(const std::map<std::string, Marking, std::less<>>& table,
                          std::string key) {
  if (table.contains(key)) return key;
  std::string wrapped = encode_tuple({key});
  if (table.contains(wrapped)) return wrapped;
  return key;
}

}  // namespace

Witness canonical_witness(const HierarchicalNet& hnet, std::string_view transition, Witness w) {
  if (!hnet.parent().has_transition(transition)) return w;
  const ChildBinding& binding = hnet.binding(transition);
  w.a = canonical_key(binding.play, std::move(w.a));
  w.b = canonical_key(binding.stop, std::move(w.b));
  if (auto* nested = std::get_if<HierExecution>(&w.x); nested && binding.child->is_hierarchical()) {
    *nested = canonical_run(binding.child->hierarchical(), std::move(*nested));
  }
  return w;
}

HierExecution canonical_run(const HierarchicalNet& hnet, HierExecution e) {
  for (auto& step : e.steps) {
    step.witness = canonical_witness(hnet, step.transition, std::move(step.witness));
  }
  return e;
}

Marking hier_replay(const HierarchicalNet& hnet, const HierExecution& e) {
  Marking m = e.start;
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    try {
      m = hier_fire(hnet, m, e.steps[i].transition, e.steps[i].witness);
    } catch (const HierarchyError& err) {
      throw err.at_parent_step(i);
    } catch (const UnknownIdError& err) {
      throw HierarchyError(Reason::NotEnabled, e.steps[i].transition, err.what())
          .at_parent_step(i);
    }
  }
  return m;
}

std::vector<ChildRunSummary> enumerate_runs(const PetriNet& net, const Marking& start,
                                            std::size_t max_steps) {
  std::vector<ChildRunSummary> out{{{}, start}};
  std::size_t level_begin = 0;
  for (std::size_t depth = 0; depth < max_steps; ++depth) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const auto& t : net.transitions()) {
        auto rest = difference(out[i].end, t.pre);
        if (!rest) continue;
        ChildRunSummary next{out[i].steps, sum(*rest, t.post)};
        next.steps.push_back(t.id);
        out.push_back(std::move(next));
      }
    }
    if (out.size() == level_end) break;
    level_begin = level_end;
  }
  return out;
}

std::string triple_id(std::string_view a, std::span<const std::string> steps,
                      std::string_view b) {
  return encode_tuple({std::string(a), encode_tuple(steps), std::string(b)});
}

FiniteSpan as_span(const HierarchicalNet& hnet, std::string_view transition,
                   std::size_t max_child_steps) {
  const Transition& t = hnet.parent().transition(transition);
  const ChildBinding& binding = hnet.binding(t.id);
  if (!binding.child->is_flat()) {
    throw HierarchyError(Reason::UnsupportedChild, t.id,
                         "child '" + binding.child_name +
                             "' is not flat; internalize it and bind the result");
  }
  const PetriNet& child = binding.child->flat();
  FiniteSet inputs = eval_object(hnet.parent(), hnet.place_sets(), t.pre);
  FiniteSet outputs = eval_object(hnet.parent(), hnet.place_sets(), t.post);

  std::vector<std::string> apex;
  FiniteSpan::Leg left, right;
  for (const auto& a : inputs) {
    for (const auto& run : enumerate_runs(child, binding.play.at(a), max_child_steps)) {
      for (const auto& b : outputs) {
        if (binding.stop.at(b) != run.end) continue;
        std::string id = triple_id(a, run.steps, b);
        left.emplace(id, a);
        right.emplace(id, b);
        apex.push_back(std::move(id));
      }
    }
  }
  return FiniteSpan(std::move(inputs), FiniteSet(std::move(apex)), std::move(outputs),
                    std::move(left), std::move(right));
}

}  // namespace hiernet
