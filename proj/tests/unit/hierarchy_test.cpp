#include <gtest/gtest.h>

#include "sample_nets.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "hiernet/hierarchy.hpp"

namespace hiernet {
namespace {

using Reason = HierarchyError::Reason;
using testing::two_children_net;

Witness right_witness(std::vector<std::string> steps) {
  return Witness{"(m0)", Execution{{{"c", 1}}, std::move(steps)}, "(b0)"};
}

template <class F>
HierarchyError expect_error(F&& f) {
  try {
    f();
  } catch (const HierarchyError& e) {
    return e;
  }
  ADD_FAILURE() << "no HierarchyError";
  return HierarchyError(Reason::NotEnabled, "", "");
}

TEST(HierFire, SecondTransitionOfTwoChildren) {
  const HierarchicalNet h = two_children_net();
  EXPECT_EQ(hier_fire(h, Marking{{"P2", 1}}, "g", right_witness({"u1"})), (Marking{{"P3", 1}}));
  EXPECT_EQ(hier_fire(h, Marking{{"P2", 1}}, "g", right_witness({"u2"})), (Marking{{"P3", 1}}));
}

TEST(HierFire, EndNotAtStopIsBoundaryMismatch) {
  const HierarchicalNet h = two_children_net();
  auto e = expect_error([&] { hier_fire(h, Marking{{"P2", 1}}, "g", right_witness({})); });
  EXPECT_EQ(e.reason(), Reason::BoundaryMismatch);
  EXPECT_EQ(e.side(), HierarchyError::Side::Stop);
}

TEST(HierFire, StartNotAtPlayIsBoundaryMismatch) {
  const HierarchicalNet h = two_children_net();
  Witness w{"(m0)", Execution{{{"d", 1}}, {}}, "(b0)"};
  auto e = expect_error([&] { hier_fire(h, Marking{{"P2", 1}}, "g", w); });
  EXPECT_EQ(e.reason(), Reason::BoundaryMismatch);
  EXPECT_EQ(e.side(), HierarchyError::Side::Play);
}

TEST(HierFire, IdentityChildRunFires) {
  auto child = std::make_shared<const NetDef>(PetriNet({"c"}, {}));
  PetriNet parent({"P", "Q"}, {{"t", {{"P", 1}}, {{"Q", 1}}}});
  HierarchicalNet::Bindings b;
  b.emplace("t", ChildBinding{"c", child, {{"(x)", {{"c", 1}}}}, {{"(y)", {{"c", 1}}}}});
  HierarchicalNet h(parent, {{"P", FiniteSet{"x"}}, {"Q", FiniteSet{"y"}}}, b);
  Witness w{"(x)", Execution{{{"c", 1}}, {}}, "(y)"};
  EXPECT_EQ(hier_fire(h, Marking{{"P", 1}}, "t", w), (Marking{{"Q", 1}}));
}

TEST(HierFire, ErrorsInCheckOrder) {
  const HierarchicalNet h = two_children_net();
  EXPECT_EQ(expect_error([&] { hier_fire(h, Marking{}, "g", right_witness({"u1"})); }).reason(),
            Reason::NotEnabled);
  Witness bad_a = right_witness({"u1"});
  bad_a.a = "(zz)";
  EXPECT_EQ(expect_error([&] { hier_fire(h, Marking{{"P2", 1}}, "g", bad_a); }).reason(),
            Reason::InvalidBoundaryState);
  auto e = expect_error([&] { hier_fire(h, Marking{{"P2", 1}}, "g", right_witness({"u1", "u2"})); });
  EXPECT_EQ(e.reason(), Reason::ChildRunInvalid);
  EXPECT_EQ(e.child_step(), 1u);
  auto unknown = expect_error([&] { hier_fire(h, Marking{{"P2", 1}}, "g", right_witness({"q"})); });
  EXPECT_EQ(unknown.reason(), Reason::ChildRunInvalid);
  EXPECT_EQ(unknown.child_step(), 0u);
}

TEST(HierFire, BareBoundaryKeysAreCanonicalized) {
  const HierarchicalNet h = two_children_net();
  Witness w{"m0", Execution{{{"c", 1}}, {"u1"}}, "b0"};
  w = canonical_witness(h, "g", w);
  EXPECT_EQ(w.a, "(m0)");
  EXPECT_EQ(w.b, "(b0)");
}

TEST(HierFire, StatefulVariantChecksConsumedState) {
  const HierarchicalNet h = two_children_net();
  GuardedMarking gm{{{"P2", 1}}, {"m0"}};
  EXPECT_EQ(hier_fire(h, gm, "g", right_witness({"u1"})), (GuardedMarking{{{"P3", 1}}, {"b0"}}));
}

TEST(HierReplay, TwoChildrenTwoSteps) {
  const HierarchicalNet h = two_children_net();
  HierExecution e{{{"P1", 1}},
                  {{"f", Witness{"(a0)", Execution{{{"x", 1}}, {"w"}}, "(m0)"}},
                   {"g", right_witness({"u1"})}}};
  EXPECT_EQ(hier_replay(h, e), (Marking{{"P3", 1}}));
  EXPECT_EQ(hier_replay(h, HierExecution{{{"P1", 1}}, {}}), (Marking{{"P1", 1}}));
}

TEST(HierReplay, ReportsFailingParentStep) {
  const HierarchicalNet h = two_children_net();
  HierExecution e{{{"P1", 1}},
                  {{"f", Witness{"(a0)", Execution{{{"x", 1}}, {"w"}}, "(m0)"}},
                   {"g", right_witness({})}}};
  auto err = expect_error([&] { hier_replay(h, e); });
  EXPECT_EQ(err.parent_step(), 1u);
  EXPECT_EQ(err.reason(), Reason::BoundaryMismatch);
}

TEST(HierarchicalNet, RejectsMissingBinding) {
  PetriNet parent({"P"}, {{"t", {{"P", 1}}, {}}});
  EXPECT_THROW(HierarchicalNet(parent, {{"P", FiniteSet{"x"}}}, {}), ValidationError);
}

TEST(HierarchicalNet, RejectsPartialPlay) {
  auto child = std::make_shared<const NetDef>(PetriNet({"c"}, {}));
  PetriNet parent({"P"}, {{"t", {{"P", 1}}, {}}});
  HierarchicalNet::Bindings b;
  b.emplace("t", ChildBinding{"c", child, {{"(x)", {}}}, {{"()", {}}}});
  try {
    HierarchicalNet(parent, {{"P", FiniteSet{"x", "y"}}}, b);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.path(), "/bindings/t/play/(y)");
  }
}

TEST(HierarchicalNet, RejectsGuardedChild) {
  auto child = std::make_shared<const NetDef>(testing::colour_guard_net());
  PetriNet parent({"P"}, {{"t", {}, {}}});
  HierarchicalNet::Bindings b;
  b.emplace("t", ChildBinding{"g", child, {{"()", {}}}, {{"()", {}}}});
  EXPECT_THROW(HierarchicalNet(parent, {{"P", FiniteSet{"x"}}}, b), ValidationError);
}

TEST(AsSpan, ParallelChildBound1HasTwoTriples) {
  const HierarchicalNet h = two_children_net();
  FiniteSpan s = as_span(h, "g", 1);
  EXPECT_EQ(s.apex().size(), 2u);
  EXPECT_TRUE(s.apex().contains(triple_id("(m0)", std::vector<std::string>{"u1"}, "(b0)")));
  EXPECT_TRUE(s.apex().contains(triple_id("(m0)", std::vector<std::string>{"u2"}, "(b0)")));
  EXPECT_TRUE(as_span(h, "g", 0).apex().empty());
}

TEST(AsSpan, BoundZeroKeepsIdentityRuns) {
  auto child = std::make_shared<const NetDef>(PetriNet({"c"}, {{"k", {{"c", 1}}, {{"c", 1}}}}));
  PetriNet parent({"P", "Q"}, {{"t", {{"P", 1}}, {{"Q", 1}}}});
  HierarchicalNet::Bindings b;
  b.emplace("t", ChildBinding{"c", child, {{"(x)", {{"c", 1}}}},
                              {{"(y)", {{"c", 1}}}, {"(z)", {}}}});
  HierarchicalNet h(parent, {{"P", FiniteSet{"x"}}, {"Q", FiniteSet{"y", "z"}}}, b);
  FiniteSpan s0 = as_span(h, "t", 0);
  ASSERT_EQ(s0.apex().size(), 1u);
  EXPECT_EQ(s0.right_of(s0.apex().elements()[0]), "(y)");
  // k is a self-loop, so every length up to the bound is accepted.
  EXPECT_EQ(as_span(h, "t", 3).apex().size(), 4u);
}

TEST(AsSpan, AcyclicChildCountsAllAcceptedRuns) {
  // Diamond: two ways from s to m, then one way to e.
  auto child = std::make_shared<const NetDef>(PetriNet(
      {"s", "m", "e"}, {{"a", {{"s", 1}}, {{"m", 1}}},
                        {"b", {{"s", 1}}, {{"m", 1}}},
                        {"c", {{"m", 1}}, {{"e", 1}}}}));
  PetriNet parent({"P", "Q"}, {{"t", {{"P", 1}}, {{"Q", 1}}}});
  HierarchicalNet::Bindings b;
  b.emplace("t", ChildBinding{"d", child, {{"(x)", {{"s", 1}}}},
                              {{"(y)", {{"e", 1}}}, {"(z)", {{"m", 1}}}}});
  HierarchicalNet h(parent, {{"P", FiniteSet{"x"}}, {"Q", FiniteSet{"y", "z"}}}, b);
  // Runs ending at {e:1}: ac, bc. Ending at {m:1}: a, b.
  EXPECT_EQ(as_span(h, "t", 10).apex().size(), 4u);
}

TEST(AsSpan, NestedChildIsUnsupported) {
  auto inner = std::make_shared<const NetDef>(two_children_net());
  PetriNet parent({"Q"}, {{"t", {}, {}}});
  HierarchicalNet::Bindings b;
  b.emplace("t", ChildBinding{"two_children", inner, {{"()", {{"P1", 1}}}}, {{"()", {{"P3", 1}}}}});
  HierarchicalNet h(parent, {{"Q", FiniteSet{"q"}}}, b);
  EXPECT_EQ(expect_error([&] { as_span(h, "t", 1); }).reason(), Reason::UnsupportedChild);
}

TEST(Nested, TwoLevelWitnessValidatesRecursively) {
  auto inner = std::make_shared<const NetDef>(two_children_net());
  PetriNet parent({"Q", "R"}, {{"t", {{"Q", 1}}, {{"R", 1}}}});
  HierarchicalNet::Bindings b;
  b.emplace("t", ChildBinding{"two_children", inner, {{"(q)", {{"P1", 1}}}}, {{"(r)", {{"P3", 1}}}}});
  HierarchicalNet top(parent, {{"Q", FiniteSet{"q"}}, {"R", FiniteSet{"r"}}}, b);

  HierExecution good{{{"P1", 1}},
                     {{"f", Witness{"(a0)", Execution{{{"x", 1}}, {"w"}}, "(m0)"}},
                      {"g", right_witness({"u2"})}}};
  EXPECT_EQ(hier_fire(top, Marking{{"Q", 1}}, "t", Witness{"(q)", good, "(r)"}),
            (Marking{{"R", 1}}));

  HierExecution bad = good;
  std::get<Execution>(bad.steps[1].witness.x).steps = {"u1", "u1"};
  auto e = expect_error([&] { hier_fire(top, Marking{{"Q", 1}}, "t", Witness{"(q)", bad, "(r)"}); });
  EXPECT_EQ(e.reason(), Reason::ChildRunInvalid);
  EXPECT_EQ(e.transition(), "t");
  EXPECT_EQ(e.child_step(), 1u);
}

TEST(EnumerateRuns, ShortestFirstInDeclarationOrder) {
  PetriNet child({"c", "d"}, {{"u1", {{"c", 1}}, {{"d", 1}}}, {"u2", {{"c", 1}}, {{"d", 1}}}});
  auto runs = enumerate_runs(child, Marking{{"c", 2}}, 2);
  ASSERT_EQ(runs.size(), 7u);
  EXPECT_TRUE(runs[0].steps.empty());
  EXPECT_EQ(runs[1].steps, (std::vector<std::string>{"u1"}));
  EXPECT_EQ(runs[2].steps, (std::vector<std::string>{"u2"}));
  EXPECT_EQ(runs[3].steps, (std::vector<std::string>{"u1", "u1"}));
  EXPECT_EQ(runs[6].steps, (std::vector<std::string>{"u2", "u2"}));
  EXPECT_EQ(runs[6].end, (Marking{{"d", 2}}));
}

TEST(HierarchyProperty, WitnessAcceptedIffInSpan) {
  testing::Rng rng(61);
  for (int i = 0; i < 60; ++i) {
    HierarchicalNet h = testing::random_hier_net(rng);
    for (const auto& t : h.parent().transitions()) {
      const ChildBinding& b = h.binding(t.id);
      const std::size_t k = rng.between(0, 3);
      FiniteSpan span = as_span(h, t.id, k);
      std::size_t accepted = 0;
      for (const auto& [a, start] : b.play) {
        for (const auto& seq : testing::all_sequences(b.child->flat(), start, k)) {
          for (const auto& [z, _] : b.stop) {
            bool ok = true;
            Marking before = t.pre;
            try {
              EXPECT_EQ(hier_fire(h, before, t.id, Witness{a, Execution{start, seq}, z}), t.post);
            } catch (const HierarchyError&) {
              ok = false;
            }
            EXPECT_EQ(before, t.pre);
            EXPECT_EQ(ok, span.apex().contains(triple_id(a, seq, z)));
            accepted += ok;
          }
        }
      }
      EXPECT_EQ(accepted, span.apex().size());
    }
  }
}

}  // namespace
}  // namespace hiernet
