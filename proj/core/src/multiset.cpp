#include "hiernet/multiset.hpp"

namespace hiernet {

Multiset::Multiset(
    std::initializer_list<std::pair<const std::string, Count>> entries) {
  for (const auto& [symbol, n] : entries) add(symbol, n);
}

Multiset::Count Multiset::count(std::string_view symbol) const {
  auto it = entries_.find(symbol);
  return it == entries_.end() ? 0 : it->second;
}

Multiset::Count Multiset::total() const {
  Count n = 0;
  for (const auto& [_, c] : entries_) n += c;
  return n;
}

void Multiset::add(std::string_view symbol, Count n) {
  if (n == 0) return;
  auto it = entries_.find(symbol);
  if (it == entries_.end()) {
    entries_.emplace(std::string(symbol), n);
  } else {
    it->second += n;
  }
}

bool Multiset::remove(std::string_view symbol, Count n) {
  if (n == 0) return true;
  auto it = entries_.find(symbol);
  if (it == entries_.end() || it->second < n) return false;
  it->second -= n;
  if (it->second == 0) entries_.erase(it);
  return true;
}

Multiset sum(const Multiset& a, const Multiset& b) {
  Multiset out = a;
  for (const auto& [symbol, n] : b) out.add(symbol, n);
  return out;
}

bool includes(const Multiset& a, const Multiset& b) {
  for (const auto& [symbol, n] : b) {
    if (a.count(symbol) < n) return false;
  }
  return true;
}

std::optional<Multiset> difference(const Multiset& a, const Multiset& b) {
  if (!includes(a, b)) return std::nullopt;
  Multiset out = a;
  for (const auto& [symbol, n] : b) out.remove(symbol, n);
  return out;
}

std::string to_string(const Multiset& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [symbol, n] : m) {
    if (!first) out += ", ";
    first = false;
    out += symbol;
    out += ':';
    out += std::to_string(n);
  }
  out += '}';
  return out;
}

std::size_t MultisetHash::operator()(const Multiset& m) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  std::hash<std::string> hs;
  std::hash<Multiset::Count> hc;
  for (const auto& [symbol, n] : m) {
    h ^= hs(symbol) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= hc(n) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace hiernet
