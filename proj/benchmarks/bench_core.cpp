#include <benchmark/benchmark.h>

#include <random>

#include "hiernet/finite_span.hpp"
#include "hiernet/internalize.hpp"
#include "hiernet/reachability.hpp"

namespace {

using namespace hiernet;

/// Ring of n places with one token circulating and a second transition per
/// place that duplicates into the next one.
PetriNet ring(std::size_t n) {
  std::vector<std::string> places;
  std::vector<Transition> ts;
  for (std::size_t i = 0; i < n; ++i) places.push_back("p" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& here = places[i];
    const auto& next = places[(i + 1) % n];
    ts.push_back({"step" + std::to_string(i), {{here, 1}}, {{next, 1}}});
    ts.push_back({"fork" + std::to_string(i), {{here, 2}}, {{next, 1}, {here, 1}}});
  }
  return PetriNet(places, ts);
}

void BM_ReachableBounded(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PetriNet net = ring(n);
  Marking from{{"p0", 3}};
  Marking to{{"p" + std::to_string(n - 1), 3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reachable_bounded(net, from, to, 3 * n));
  }
}
BENCHMARK(BM_ReachableBounded)->Arg(4)->Arg(8)->Arg(12);

FiniteSpan dense_span(const FiniteSet& l, const FiniteSet& r, std::size_t apex, unsigned seed) {
  std::mt19937 gen(seed);
  std::vector<std::string> ids;
  FiniteSpan::Leg left, right;
  for (std::size_t i = 0; i < apex; ++i) {
    std::string s = "s" + std::to_string(i);
    left[s] = l.elements()[gen() % l.size()];
    right[s] = r.elements()[gen() % r.size()];
    ids.push_back(std::move(s));
  }
  return FiniteSpan(l, FiniteSet(ids), r, left, right);
}

FiniteSet numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return FiniteSet(out);
}

void BM_ComposeSpans(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  FiniteSet a = numbered("a", n), b = numbered("b", n), c = numbered("c", n);
  FiniteSpan f = dense_span(a, b, 4 * n, 1);
  FiniteSpan g = dense_span(b, c, 4 * n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(compose_spans(f, g));
}
BENCHMARK(BM_ComposeSpans)->Arg(8)->Arg(32)->Arg(128);

void BM_InternalizeGuarded(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PetriNet base = ring(n);
  PlaceSets sets;
  for (const auto& p : base.places()) sets.emplace(p, numbered(p + "_", 3));
  GuardedNet::Spans spans;
  unsigned seed = 0;
  for (const auto& t : base.transitions()) {
    spans.emplace(t.id, dense_span(eval_object(base, sets, t.pre),
                                   eval_object(base, sets, t.post), 6, ++seed));
  }
  GuardedNet g(base, sets, spans);
  for (auto _ : state) benchmark::DoNotOptimize(internalize_guarded(g));
}
BENCHMARK(BM_InternalizeGuarded)->Arg(4)->Arg(16)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
