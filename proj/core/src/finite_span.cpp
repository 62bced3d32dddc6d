#include "hiernet/finite_span.hpp"

#include "hiernet/errors.hpp"
#include "hiernet/tuple_id.hpp"

namespace hiernet {

FiniteSet::FiniteSet(std::vector<std::string> elements)
    : elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].empty()) {
      throw ValidationError("/" + std::to_string(i), "empty element id");
    }
    if (!index_.insert(elements_[i]).second) {
      throw ValidationError("/" + std::to_string(i),
                            "duplicate element '" + elements_[i] + "'");
    }
  }
}

bool FiniteSet::contains(std::string_view element) const {
  return index_.find(element) != index_.end();
}

bool same_elements(const FiniteSet& a, const FiniteSet& b) {
  if (a.size() != b.size()) return false;
  for (const auto& e : a) {
    if (!b.contains(e)) return false;
  }
  return true;
}

FiniteSet product(const FiniteSet& a, const FiniteSet& b) {
  std::vector<std::string> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(encode_tuple({x, y}));
  }
  return FiniteSet(std::move(out));
}

FiniteSpan::FiniteSpan(FiniteSet left_foot, FiniteSet apex, FiniteSet right_foot,
                       Leg left_leg, Leg right_leg)
    : left_foot_(std::move(left_foot)),
      apex_(std::move(apex)),
      right_foot_(std::move(right_foot)),
      left_leg_(std::move(left_leg)),
      right_leg_(std::move(right_leg)) {
  auto check_leg = [this](const Leg& leg, const FiniteSet& foot, const char* name) {
    const std::string path = std::string("/") + name;
    for (const auto& s : apex_) {
      auto it = leg.find(s);
      if (it == leg.end()) {
        throw ValidationError(path + pointer_token(s),
                              std::string(name) + " leg undefined on '" + s + "'");
      }
      if (!foot.contains(it->second)) {
        throw ValidationError(path + pointer_token(s), std::string(name) +
                                                           " leg image '" + it->second +
                                                           "' outside its foot");
      }
    }
    for (const auto& [s, _] : leg) {
      if (!apex_.contains(s)) {
        throw ValidationError(path + pointer_token(s),
                              std::string(name) + " leg names non-apex element '" + s + "'");
      }
    }
  };
  check_leg(left_leg_, left_foot_, "left");
  check_leg(right_leg_, right_foot_, "right");
}

const std::string& FiniteSpan::left_of(std::string_view witness) const {
  auto it = left_leg_.find(witness);
  if (it == left_leg_.end()) throw UnknownIdError("apex element", witness);
  return it->second;
}

const std::string& FiniteSpan::right_of(std::string_view witness) const {
  auto it = right_leg_.find(witness);
  if (it == right_leg_.end()) throw UnknownIdError("apex element", witness);
  return it->second;
}

FiniteSpan::LegGraph FiniteSpan::leg_graph() const {
  LegGraph graph;
  for (const auto& s : apex_) ++graph[{left_leg_.at(s), right_leg_.at(s)}];
  return graph;
}

bool equivalent(const FiniteSpan& a, const FiniteSpan& b) {
  return same_elements(a.left_foot(), b.left_foot()) &&
         same_elements(a.right_foot(), b.right_foot()) &&
         a.leg_graph() == b.leg_graph();
}

FiniteSpan identity_span(const FiniteSet& foot) {
  FiniteSpan::Leg leg;
  for (const auto& e : foot) leg.emplace(e, e);
  return FiniteSpan(foot, foot, foot, leg, leg);
}

FiniteSpan compose_spans(const FiniteSpan& f, const FiniteSpan& g) {
  if (!same_elements(f.right_foot(), g.left_foot())) {
    throw ValidationError("", "cannot compose spans: feet differ");
  }
  // Bucket g's apex by its left image so the pullback is a join, not a double loop.
  std::map<std::string_view, std::vector<std::string_view>, std::less<>> by_left;
  for (const auto& u : g.apex()) by_left[g.left_of(u)].push_back(u);

  std::vector<std::string> apex;
  FiniteSpan::Leg left, right;
  for (const auto& s : f.apex()) {
    auto it = by_left.find(f.right_of(s));
    if (it == by_left.end()) continue;
    for (std::string_view u : it->second) {
      std::string id = encode_tuple({s, std::string(u)});
      left.emplace(id, f.left_of(s));
      right.emplace(id, g.right_of(u));
      apex.push_back(std::move(id));
    }
  }
  return FiniteSpan(f.left_foot(), FiniteSet(std::move(apex)), g.right_foot(),
                    std::move(left), std::move(right));
}

FiniteSpan tensor_spans(const FiniteSpan& f, const FiniteSpan& g) {
  std::vector<std::string> apex;
  apex.reserve(f.apex().size() * g.apex().size());
  FiniteSpan::Leg left, right;
  for (const auto& s : f.apex()) {
    for (const auto& u : g.apex()) {
      std::string id = encode_tuple({s, u});
      left.emplace(id, encode_tuple({f.left_of(s), g.left_of(u)}));
      right.emplace(id, encode_tuple({f.right_of(s), g.right_of(u)}));
      apex.push_back(std::move(id));
    }
  }
  return FiniteSpan(product(f.left_foot(), g.left_foot()), FiniteSet(std::move(apex)),
                    product(f.right_foot(), g.right_foot()), std::move(left),
                    std::move(right));
}

}  // namespace hiernet
