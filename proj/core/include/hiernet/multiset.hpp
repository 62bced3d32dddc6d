#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace hiernet {

/// Finite multiset over string symbols, kept in canonical form: a symbol is
/// either absent or stored with a positive count. Structural equality is
/// therefore multiset equality.
class Multiset {
 public:
  using Count = std::uint64_t;
  using Storage = std::map<std::string, Count, std::less<>>;
  using const_iterator = Storage::const_iterator;

  Multiset() = default;
  Multiset(std::initializer_list<std::pair<const std::string, Count>> entries);

  Count count(std::string_view symbol) const;
  /// Total number of elements, counted with multiplicity.
  Count total() const;
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  void add(std::string_view symbol, Count n = 1);
  /// Removes `n` copies; returns false (and leaves the multiset untouched) if
  /// fewer than `n` are present.
  bool remove(std::string_view symbol, Count n = 1);

  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }
  const Storage& entries() const noexcept { return entries_; }

  friend bool operator==(const Multiset&, const Multiset&) = default;
  friend auto operator<=>(const Multiset&, const Multiset&) = default;

 private:
  Storage entries_;
};

/// Pointwise sum.
Multiset sum(const Multiset& a, const Multiset& b);
inline Multiset operator+(const Multiset& a, const Multiset& b) {
  return sum(a, b);
}

/// Pointwise difference `a - b`; empty when some count of `b` exceeds `a`.
std::optional<Multiset> difference(const Multiset& a, const Multiset& b);

/// True iff `b` is pointwise below `a`, i.e. `difference(a, b)` is defined.
bool includes(const Multiset& a, const Multiset& b);

/// Renders as `{p1:2, p3:1}`.
std::string to_string(const Multiset& m);

struct MultisetHash {
  std::size_t operator()(const Multiset& m) const noexcept;
};

}  // namespace hiernet
