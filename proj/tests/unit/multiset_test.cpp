#include <gtest/gtest.h>

#include "generators.hpp"
#include "hiernet/multiset.hpp"

namespace hiernet {
namespace {

TEST(Multiset, ZeroCountsAreDropped) {
  Multiset m{{"a", 2}, {"b", 0}};
  EXPECT_EQ(m.support_size(), 1u);
  EXPECT_EQ(m, (Multiset{{"a", 2}}));
  EXPECT_EQ(m.count("b"), 0u);
}

TEST(Multiset, RemoveRefusesToGoNegative) {
  Multiset m{{"a", 1}};
  EXPECT_FALSE(m.remove("a", 2));
  EXPECT_EQ(m.count("a"), 1u);
  EXPECT_TRUE(m.remove("a"));
  EXPECT_TRUE(m.empty());
}

TEST(Multiset, DifferenceAndIncludes) {
  Multiset a{{"p", 2}, {"q", 1}};
  Multiset b{{"p", 1}};
  EXPECT_TRUE(includes(a, b));
  EXPECT_FALSE(includes(b, a));
  EXPECT_EQ(difference(a, b), (Multiset{{"p", 1}, {"q", 1}}));
  EXPECT_FALSE(difference(b, a).has_value());
}

TEST(Multiset, ToStringIsSorted) {
  EXPECT_EQ(to_string(Multiset{{"p3", 1}, {"p1", 2}}), "{p1:2, p3:1}");
  EXPECT_EQ(to_string(Multiset{}), "{}");
}

TEST(MultisetProperty, SumThenDifferenceRestores) {
  testing::Rng rng(7);
  const PetriNet net({"a", "b", "c"}, {});
  for (int i = 0; i < 300; ++i) {
    Multiset x = testing::random_marking(rng, net, 5);
    Multiset y = testing::random_marking(rng, net, 5);
    EXPECT_EQ(difference(x + y, y), x);
    EXPECT_TRUE(includes(x + y, x));
    EXPECT_EQ((x + y).total(), x.total() + y.total());
    EXPECT_EQ(x + y, y + x);
    for (const auto& [_, n] : x + y) EXPECT_GT(n, 0u);
  }
}

}  // namespace
}  // namespace hiernet
