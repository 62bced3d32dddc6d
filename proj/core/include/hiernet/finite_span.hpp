#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hiernet {

/// Finite set of non-empty element ids. Iteration follows construction order,
/// which is treated as canonical.
class FiniteSet {
 public:
  FiniteSet() = default;
  /// Throws ValidationError on duplicates or empty ids.
  explicit FiniteSet(std::vector<std::string> elements);
  FiniteSet(std::initializer_list<std::string> elements)
      : FiniteSet(std::vector<std::string>(elements)) {}

  const std::vector<std::string>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(std::string_view element) const;

  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  /// Order-sensitive equality.
  friend bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return a.elements_ == b.elements_;
  }

 private:
  std::vector<std::string> elements_;
  std::set<std::string, std::less<>> index_;
};

/// Same elements regardless of order.
bool same_elements(const FiniteSet& a, const FiniteSet& b);

/// Cartesian product with pair-encoded elements, in lexicographic order.
FiniteSet product(const FiniteSet& a, const FiniteSet& b);

/// A span `left_foot <- apex -> right_foot` of finite sets. Each apex element
/// is a witness for the pair (left_leg(s), right_leg(s)).
class FiniteSpan {
 public:
  using Leg = std::map<std::string, std::string, std::less<>>;
  /// Multiplicity of each (left, right) pair over the apex.
  using LegGraph = std::map<std::pair<std::string, std::string>, std::size_t>;

  FiniteSpan() = default;
  /// Throws ValidationError if a leg is not total on the apex or maps outside
  /// its foot.
  FiniteSpan(FiniteSet left_foot, FiniteSet apex, FiniteSet right_foot, Leg left_leg,
             Leg right_leg);

  const FiniteSet& left_foot() const noexcept { return left_foot_; }
  const FiniteSet& right_foot() const noexcept { return right_foot_; }
  const FiniteSet& apex() const noexcept { return apex_; }
  const Leg& left_leg() const noexcept { return left_leg_; }
  const Leg& right_leg() const noexcept { return right_leg_; }

  const std::string& left_of(std::string_view witness) const;
  const std::string& right_of(std::string_view witness) const;

  LegGraph leg_graph() const;

 private:
  FiniteSet left_foot_;
  FiniteSet apex_;
  FiniteSet right_foot_;
  Leg left_leg_;
  Leg right_leg_;
};

/// Spans compared up to isomorphism of apexes: feet with the same elements and
/// equal leg graphs.
bool equivalent(const FiniteSpan& a, const FiniteSpan& b);

/// Apex = foot, both legs the identity.
FiniteSpan identity_span(const FiniteSet& foot);

/// Sequential composition through the pullback over the shared foot. Apex
/// elements are pairs `(s,u)` with `f.right_leg(s) == g.left_leg(u)`.
/// Throws ValidationError if `f.right_foot` and `g.left_foot` differ.
FiniteSpan compose_spans(const FiniteSpan& f, const FiniteSpan& g);

/// Monoidal product: feet and apex are cartesian products, legs componentwise.
FiniteSpan tensor_spans(const FiniteSpan& f, const FiniteSpan& g);

}  // namespace hiernet
