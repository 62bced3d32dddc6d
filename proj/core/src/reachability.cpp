#include "hiernet/reachability.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <vector>

namespace hiernet {

namespace {

constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

struct Node {
  Marking marking;
  std::size_t parent;
  std::size_t via;  // transition index into net.transitions()
  std::size_t depth;
};

/// Shared BFS core. Stops early when `target` is discovered.
class Search {
 public:
  Search(const PetriNet& net, const Marking& from) : net_(net) {
    nodes_.push_back({from, kRoot, 0, 0});
    seen_.emplace(from, 0);
  }

  std::optional<std::size_t> run(std::size_t max_steps, const Marking* target) {
    if (target && nodes_.front().marking == *target) return 0;
    const auto& transitions = net_.transitions();
    for (std::size_t head = 0; head < nodes_.size(); ++head) {
      if (nodes_[head].depth >= max_steps) continue;
      for (std::size_t ti = 0; ti < transitions.size(); ++ti) {
        auto rest = difference(nodes_[head].marking, transitions[ti].pre);
        if (!rest) continue;
        Marking next = sum(*rest, transitions[ti].post);
        if (seen_.contains(next)) continue;
        const std::size_t id = nodes_.size();
        seen_.emplace(next, id);
        nodes_.push_back({std::move(next), head, ti, nodes_[head].depth + 1});
        if (target && nodes_[id].marking == *target) return id;
      }
    }
    return std::nullopt;
  }

  Execution path_to(std::size_t id) const {
    Execution e{nodes_.front().marking, {}};
    for (std::size_t cur = id; nodes_[cur].parent != kRoot; cur = nodes_[cur].parent) {
      e.steps.push_back(net_.transitions()[nodes_[cur].via].id);
    }
    std::reverse(e.steps.begin(), e.steps.end());
    return e;
  }

  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  const PetriNet& net_;
  std::vector<Node> nodes_;
  std::unordered_map<Marking, std::size_t, MultisetHash> seen_;
};

}  // namespace

std::optional<Execution> reachable_bounded(const PetriNet& net,
                                           const Marking& from,
                                           const Marking& to,
                                           std::size_t max_steps) {
  validate_marking(net, from);
  validate_marking(net, to);
  Search search(net, from);
  auto hit = search.run(max_steps, &to);
  if (!hit) return std::nullopt;
  return search.path_to(*hit);
}

std::map<Marking, std::size_t> reachable_within(const PetriNet& net,
                                                const Marking& from,
                                                std::size_t max_steps) {
  validate_marking(net, from);
  Search search(net, from);
  search.run(max_steps, nullptr);
  std::map<Marking, std::size_t> out;
  for (const Node& n : search.nodes()) out.emplace(n.marking, n.depth);
  return out;
}

}  // namespace hiernet
