#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace noesis {

// Fixed-width set of indices [0, size()). The width is chosen at construction
// and never changes; binary operations require equal widths.
template <typename Tag>
class IndexSet {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  IndexSet() = default;
  explicit IndexSet(std::size_t size) : size_(size), words_(word_count(size), 0) {}

  static IndexSet full(std::size_t size) {
    IndexSet s(size);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  static IndexSet of(std::size_t size, std::initializer_list<std::size_t> items) {
    IndexSet s(size);
    for (auto i : items) s.set(i);
    return s;
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const {
    assert(i < size_);
    return (words_[i / kBits] >> (i % kBits)) & 1u;
  }
  void set(std::size_t i) {
    assert(i < size_);
    words_[i / kBits] |= std::uint64_t{1} << (i % kBits);
  }
  void reset(std::size_t i) {
    assert(i < size_);
    words_[i / kBits] &= ~(std::uint64_t{1} << (i % kBits));
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }

  // Smallest member >= from, or npos.
  std::size_t next(std::size_t from) const {
    if (from >= size_) return npos;
    std::size_t wi = from / kBits;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from % kBits));
    while (true) {
      if (w) return wi * kBits + static_cast<std::size_t>(std::countr_zero(w));
      if (++wi == words_.size()) return npos;
      w = words_[wi];
    }
  }
  std::size_t first() const { return next(0); }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        f(wi * kBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  bool is_subset_of(const IndexSet& o) const {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const IndexSet& o) const {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  // True iff both sets agree on every index < limit.
  bool equal_below(const IndexSet& o, std::size_t limit) const {
    assert(size_ == o.size_);
    std::size_t full_words = limit / kBits;
    for (std::size_t i = 0; i < full_words; ++i)
      if (words_[i] != o.words_[i]) return false;
    std::size_t rem = limit % kBits;
    if (rem == 0) return true;
    std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
    return ((words_[full_words] ^ o.words_[full_words]) & mask) == 0;
  }

  // Everything at or above `from` cleared.
  IndexSet truncated(std::size_t from) const {
    IndexSet out(size_);
    for (std::size_t i = 0; i < from && i < size_; ++i)
      if (test(i)) out.set(i);
    return out;
  }

  IndexSet& operator&=(const IndexSet& o) {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  IndexSet& operator|=(const IndexSet& o) {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  IndexSet& operator-=(const IndexSet& o) {
    assert(size_ == o.size_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
  friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }

  IndexSet complement() const {
    IndexSet out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.trim();
    return out;
  }

  // Same set over a wider universe.
  IndexSet widened(std::size_t new_size) const {
    assert(new_size >= size_);
    IndexSet out(new_size);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i];
    return out;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(size_);
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  static constexpr std::size_t kBits = 64;
  static std::size_t word_count(std::size_t n) { return (n + kBits - 1) / kBits; }
  void trim() {
    std::size_t rem = size_ % kBits;
    if (rem && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ObjectTag {};
struct AttributeTag {};
using ObjectSet = IndexSet<ObjectTag>;
using AttributeSet = IndexSet<AttributeTag>;

// Lexicographic comparison of the ascending member lists: {0,1} < {0,2} < {1}.
template <typename Tag>
std::strong_ordering lexicographic(const IndexSet<Tag>& a, const IndexSet<Tag>& b) {
  std::size_t i = a.first(), j = b.first();
  while (i != IndexSet<Tag>::npos && j != IndexSet<Tag>::npos) {
    if (i != j) return i <=> j;
    i = a.next(i + 1);
    j = b.next(j + 1);
  }
  if (i == j) return std::strong_ordering::equal;
  return i == IndexSet<Tag>::npos ? std::strong_ordering::less : std::strong_ordering::greater;
}

// Lectic order: a < b iff the smallest element of the symmetric difference is in b.
template <typename Tag>
bool lectic_less(const IndexSet<Tag>& a, const IndexSet<Tag>& b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool in_a = a.test(i), in_b = b.test(i);
    if (in_a != in_b) return in_b;
  }
  return false;
}

struct IndexSetHash {
  template <typename Tag>
  std::size_t operator()(const IndexSet<Tag>& s) const { return s.hash(); }
};

}  // namespace noesis
