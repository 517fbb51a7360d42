#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nbhd {

/// Subset of a finite domain of at most 64 worlds, as a characteristic bit mask.
/// World i is bit i; equal sets over the same domain compare equal bitwise.
class WorldSet {
 public:
  WorldSet() = default;
  WorldSet(std::size_t domain_size, std::uint64_t bits)
      : bits_(bits & full_mask(domain_size)), size_(static_cast<std::uint32_t>(domain_size)) {}

  static WorldSet empty(std::size_t domain_size) { return {domain_size, 0}; }
  static WorldSet full(std::size_t domain_size) { return {domain_size, full_mask(domain_size)}; }
  static WorldSet singleton(std::size_t domain_size, std::size_t world) {
    return {domain_size, std::uint64_t{1} << world};
  }

  std::uint64_t bits() const { return bits_; }
  std::size_t domain_size() const { return size_; }
  std::size_t count() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool is_empty() const { return bits_ == 0; }
  bool is_full() const { return bits_ == full_mask(size_); }
  bool contains(std::size_t world) const { return world < size_ && (bits_ >> world & 1u); }
  bool is_subset_of(WorldSet other) const { return (bits_ & ~other.bits_) == 0; }

  WorldSet complement() const { return {size_, ~bits_}; }
  WorldSet with(std::size_t world) const { return {size_, bits_ | (std::uint64_t{1} << world)}; }

  friend WorldSet operator&(WorldSet a, WorldSet b) { return {a.size_, a.bits_ & b.bits_}; }
  friend WorldSet operator|(WorldSet a, WorldSet b) { return {a.size_, a.bits_ | b.bits_}; }

  friend bool operator==(WorldSet, WorldSet) = default;
  /// Ascending by bit-vector value.
  friend std::strong_ordering operator<=>(WorldSet a, WorldSet b) {
    if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
    return a.size_ <=> b.size_;
  }

  static constexpr std::uint64_t full_mask(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  }

 private:
  std::uint64_t bits_ = 0;
  std::uint32_t size_ = 0;
};

/// Duplicate-free family of world sets, kept sorted ascending.
class Family {
 public:
  Family() = default;
  explicit Family(std::vector<WorldSet> sets) : sets_(std::move(sets)) { canonicalize(); }

  std::span<const WorldSet> sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  bool contains(WorldSet x) const { return std::binary_search(sets_.begin(), sets_.end(), x); }

  /// Returns true if `x` was not already present.
  bool insert(WorldSet x) {
    auto it = std::lower_bound(sets_.begin(), sets_.end(), x);
    if (it != sets_.end() && *it == x) return false;
    sets_.insert(it, x);
    return true;
  }
  bool erase(WorldSet x) {
    auto it = std::lower_bound(sets_.begin(), sets_.end(), x);
    if (it == sets_.end() || *it != x) return false;
    sets_.erase(it);
    return true;
  }
  bool is_subfamily_of(const Family& other) const {
    return std::includes(other.sets_.begin(), other.sets_.end(), sets_.begin(), sets_.end());
  }

  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }

  friend bool operator==(const Family&, const Family&) = default;

 private:
  void canonicalize() {
    std::sort(sets_.begin(), sets_.end());
    sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
  }
  std::vector<WorldSet> sets_;
};

}  // namespace nbhd
