#include <gtest/gtest.h>

#include <functional>

#include "sample_nets.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "hiernet/guarded_net.hpp"
#include "hiernet/tuple_id.hpp"

namespace hiernet {
namespace {

using testing::colour_guard_net;

TEST(EvalObject, ProductInSlotOrder) {
  const GuardedNet g = colour_guard_net();
  PetriNet base = g.base();
  FiniteSet s = eval_object(base, g.place_sets(), Marking{{"A", 1}, {"B", 1}});
  EXPECT_EQ(s.elements(), (std::vector<std::string>{"(red,yellow)", "(red,green)",
                                                    "(blue,yellow)", "(blue,green)"}));
  EXPECT_EQ(eval_object(base, g.place_sets(), Marking{{"C", 2}}).size(), 9u);
}

TEST(EvalObject, EmptyMarkingIsUnitTuple) {
  const GuardedNet g = colour_guard_net();
  EXPECT_EQ(eval_object(g, Marking{}).elements(), (std::vector<std::string>{"()"}));
}

TEST(EvalObject, EmptyStateSetGivesEmptyProduct) {
  PetriNet net({"p"}, {});
  PlaceSets sets{{"p", FiniteSet{}}};
  EXPECT_TRUE(eval_object(net, sets, Marking{{"p", 1}}).empty());
}

TEST(GuardedNet, RejectsWrongFoot) {
  PetriNet base({"A", "B"}, {{"f", {{"A", 1}}, {{"B", 1}}}});
  PlaceSets sets{{"A", FiniteSet{"x"}}, {"B", FiniteSet{"y"}}};
  GuardedNet::Spans spans;
  spans.emplace("f", identity_span(FiniteSet{"(x)"}));
  EXPECT_THROW(GuardedNet(base, sets, spans), ValidationError);
}

TEST(GuardedNet, RejectsMissingPlaceSet) {
  PetriNet base({"A"}, {});
  EXPECT_THROW(GuardedNet(base, PlaceSets{}, {}), ValidationError);
}

TEST(GuardedFire, BlueTakesS1) {
  const GuardedNet g = colour_guard_net();
  GuardedMarking gm{{{"A", 1}}, {"blue"}};
  GuardedMarking next = guarded_fire(g, gm, "f", "s1");
  EXPECT_EQ(next, (GuardedMarking{{{"B", 1}}, {"green"}}));
  EXPECT_THROW(guarded_fire(g, gm, "f", "s2"), WitnessMismatchError);
  EXPECT_THROW(guarded_fire(g, gm, "f", "nope"), WitnessMismatchError);
  EXPECT_THROW(guarded_fire(g, next, "g", "z1"), WitnessMismatchError);
  EXPECT_THROW(guarded_fire(g, gm, "g", "z1"), NotEnabledError);
}

TEST(GuardedFire, ConsumesOldestAndAppends) {
  const GuardedNet g = colour_guard_net();
  GuardedMarking gm{{{"A", 2}, {"B", 1}}, {"red", "blue", "yellow"}};
  GuardedMarking next = guarded_fire(g, gm, "f", "s2");
  EXPECT_EQ(next, (GuardedMarking{{{"A", 1}, {"B", 2}}, {"blue", "yellow", "green"}}));
  EXPECT_THROW(guarded_fire(g, gm, "f", "s1"), WitnessMismatchError);
}

TEST(GuardedMarking, ValidationChecksStates) {
  const GuardedNet g = colour_guard_net();
  EXPECT_NO_THROW(validate_guarded_marking(g.base(), g.place_sets(), {{{"A", 1}}, {"red"}}));
  EXPECT_THROW(validate_guarded_marking(g.base(), g.place_sets(), {{{"A", 1}}, {"green"}}),
               ValidationError);
  EXPECT_THROW(validate_guarded_marking(g.base(), g.place_sets(), {{{"A", 1}}, {}}),
               ValidationError);
}

TEST(EvalExecution, ColourGuardComposesToEmpty) {
  const GuardedNet g = colour_guard_net();
  FiniteSpan s = eval_execution(g, Execution{{{"A", 1}}, {"f", "g"}});
  EXPECT_TRUE(s.apex().empty());
  EXPECT_TRUE(compose_spans(g.span("f"), g.span("g")).apex().empty());
}

TEST(EvalExecution, EmptyRunIsIdentity) {
  const GuardedNet g = colour_guard_net();
  FiniteSpan s = eval_execution(g, Execution{{{"A", 1}}, {}});
  EXPECT_TRUE(equivalent(s, identity_span(eval_object(g, Marking{{"A", 1}}))));
}

TEST(EvalExecution, RejectsUnreplayableRun) {
  EXPECT_THROW(eval_execution(colour_guard_net(), Execution{{{"A", 1}}, {"g"}}), NotEnabledError);
}

/// (start tuple, end tuple) counts over every choice of witnesses, fired
/// strictly oldest-first.
testing::PairCounts witnessed_runs(const GuardedNet& g, const Execution& e) {
  testing::PairCounts out;
  for (const auto& start : eval_object(g, e.start)) {
    std::function<void(const GuardedMarking&, std::size_t)> go = [&](const GuardedMarking& gm,
                                                                      std::size_t i) {
      if (i == e.steps.size()) {
        ++out[{start, encode_tuple(gm.state)}];
        return;
      }
      for (const auto& s : g.span(e.steps[i]).apex()) {
        try {
          go(guarded_fire(g, gm, e.steps[i], s), i + 1);
        } catch (const WitnessMismatchError&) {
        }
      }
    };
    go(GuardedMarking{e.start, decode_tuple(start)}, 0);
  }
  return out;
}

TEST(EvalExecutionProperty, CountsWitnessedRuns) {
  testing::Rng rng(51);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    GuardedNet g = testing::random_guarded_net(rng, {{3, 3, 2, true}, 2, 3});
    Marking start = testing::random_marking(rng, g.base(), 3);
    auto sequences = testing::all_sequences(g.base(), start, 3);
    const auto& seq = rng.pick(sequences);
    Execution e{start, seq};
    FiniteSpan s = eval_execution(g, e);
    EXPECT_EQ(testing::pair_counts(s), witnessed_runs(g, e));
    EXPECT_TRUE(same_elements(s.left_foot(), eval_object(g, start)));
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

}  // namespace
}  // namespace hiernet
