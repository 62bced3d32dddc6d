#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hiernet/errors.hpp"
#include "hiernet/finite_span.hpp"
#include "hiernet/guarded_net.hpp"
#include "hiernet/petri_net.hpp"

namespace hiernet {

class NetDef;

/// The child attached to one parent transition. `play` picks the child's start
/// marking from an input boundary state, `stop` names the accepting child
/// marking for an output boundary state. Boundary states are elements of
/// eval_object(pre) and eval_object(post) respectively.
struct ChildBinding {
  std::string child_name;
  std::shared_ptr<const NetDef> child;
  std::map<std::string, Marking, std::less<>> play;
  std::map<std::string, Marking, std::less<>> stop;
};

/// Parent net whose every transition delegates to a child net.
class HierarchicalNet {
 public:
  using Bindings = std::map<std::string, ChildBinding, std::less<>>;

  HierarchicalNet() = default;
  /// Throws ValidationError if a transition lacks a binding, a child is a
  /// guarded net, or play/stop are not total on their boundary sets or name
  /// places the child does not have.
  HierarchicalNet(PetriNet parent, PlaceSets place_sets, Bindings bindings);

  const PetriNet& parent() const noexcept { return parent_; }
  const PlaceSets& place_sets() const noexcept { return place_sets_; }
  const Bindings& bindings() const noexcept { return bindings_; }
  const ChildBinding& binding(std::string_view transition) const;

 private:
  PetriNet parent_;
  PlaceSets place_sets_;
  Bindings bindings_;
};

/// Any net definition the engine can host.
class NetDef {
 public:
  using Variant = std::variant<PetriNet, GuardedNet, HierarchicalNet>;

  NetDef(PetriNet net) : value_(std::move(net)) {}
  NetDef(GuardedNet net) : value_(std::move(net)) {}
  NetDef(HierarchicalNet net) : value_(std::move(net)) {}

  const Variant& value() const noexcept { return value_; }
  bool is_flat() const noexcept { return std::holds_alternative<PetriNet>(value_); }
  bool is_guarded() const noexcept { return std::holds_alternative<GuardedNet>(value_); }
  bool is_hierarchical() const noexcept {
    return std::holds_alternative<HierarchicalNet>(value_);
  }
  const PetriNet& flat() const { return std::get<PetriNet>(value_); }
  const GuardedNet& guarded() const { return std::get<GuardedNet>(value_); }
  const HierarchicalNet& hierarchical() const { return std::get<HierarchicalNet>(value_); }

  /// The underlying place/transition structure (the parent for hierarchical nets).
  const PetriNet& shape() const;

 private:
  Variant value_;
};

struct Witness;
struct HierStep;

/// A run of a hierarchical net: each step names a parent transition and the
/// witness for it. Nesting witnesses gives runs of deeper hierarchies.
struct HierExecution {
  Marking start;
  std::vector<HierStep> steps;
};

/// A run of a child net: flat children take an Execution, hierarchical
/// children a HierExecution.
using ChildRun = std::variant<Execution, HierExecution>;

/// The triple (a, x, b) that licenses one parent firing.
struct Witness {
  std::string a;
  ChildRun x;
  std::string b;
};

struct HierStep {
  std::string transition;
  Witness witness;
};

const Marking& run_start(const ChildRun& run);

class HierarchyError : public Error {
 public:
  enum class Reason {
    NotEnabled,
    InvalidBoundaryState,
    ChildRunInvalid,
    BoundaryMismatch,
    UnsupportedChild,
  };
  enum class Side { Play, Stop };

  HierarchyError(Reason reason, std::string transition, std::string detail,
                 std::optional<std::size_t> child_step = std::nullopt,
                 std::optional<Side> side = std::nullopt);

  Reason reason() const noexcept { return reason_; }
  const std::string& transition() const noexcept { return transition_; }
  const std::string& detail() const noexcept { return detail_; }
  /// Index of the failing step inside the child run (ChildRunInvalid).
  std::optional<std::size_t> child_step() const noexcept { return child_step_; }
  /// Which boundary disagreed (BoundaryMismatch).
  std::optional<Side> side() const noexcept { return side_; }
  /// Index of the failing parent step, set by hier_replay.
  std::optional<std::size_t> parent_step() const noexcept { return parent_step_; }

  HierarchyError at_parent_step(std::size_t index) const;

 private:
  Reason reason_;
  std::string transition_;
  std::string detail_;
  std::optional<std::size_t> child_step_;
  std::optional<Side> side_;
  std::optional<std::size_t> parent_step_;
};

std::string_view to_string(HierarchyError::Reason reason);

/// Validates the witness against the child of `transition` and, if it holds,
/// returns the parent firing `fire(parent, m, transition)`. Checks, in order:
/// the transition is enabled, a and b are boundary states, the child run
/// starts at play(a), replays on the child (recursively for hierarchical
/// children) and ends at stop(b). Throws HierarchyError; the input is never
/// modified.
Marking hier_fire(const HierarchicalNet& hnet, const Marking& m, std::string_view transition,
                  const Witness& w);

/// State-tracking variant: parent tokens carry boundary states. The consumed
/// tokens (oldest first) must carry the states of `a`; produced tokens are
/// appended with the states of `b`.
GuardedMarking hier_fire(const HierarchicalNet& hnet, const GuardedMarking& gm,
                         std::string_view transition, const Witness& w);

/// Rewrites bare boundary states `s` to the one-slot tuple id `(s)` where that
/// is what the binding expects, recursing into witnessed child runs.
Witness canonical_witness(const HierarchicalNet& hnet, std::string_view transition, Witness w);
HierExecution canonical_run(const HierarchicalNet& hnet, HierExecution e);

/// Folds hier_fire over the steps; errors carry the failing parent step.
Marking hier_replay(const HierarchicalNet& hnet, const HierExecution& e);

/// Every firing sequence of length <= max_steps from `start`, shortest first
/// and, within a length, in lexicographic transition declaration order.
struct ChildRunSummary {
  std::vector<std::string> steps;
  Marking end;
};
std::vector<ChildRunSummary> enumerate_runs(const PetriNet& net, const Marking& start,
                                            std::size_t max_steps);

/// Apex id of the triple (a, steps, b).
std::string triple_id(std::string_view a, std::span<const std::string> steps,
                      std::string_view b);

/// Bounded materialization of the transition's span: the apex holds every
/// triple (a, x, b) with x a child run of length <= max_child_steps from
/// play(a) to stop(b). Throws HierarchyError(UnsupportedChild) if the child
/// is not flat.
FiniteSpan as_span(const HierarchicalNet& hnet, std::string_view transition,
                   std::size_t max_child_steps);

}  // namespace hiernet
