#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace bcaret {

// Fixed-width bit set over dynamically sized state spaces. All binary
// operations assume both operands were created with the same size.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  // Extends capacity, keeping existing bits. Only growth is supported.
  void grow(std::size_t new_size) {
    if (new_size > size_) {
      size_ = new_size;
      words_.resize((new_size + 63) / 64, 0);
    }
  }

  StateSet resized(std::size_t new_size) const {
    StateSet out(new_size);
    for (std::size_t i = 0; i < words_.size() && i < out.words_.size(); ++i)
      out.words_[i] = words_[i];
    return out;
  }

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  std::size_t count() const;

  bool subset_of(const StateSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t ow = i < other.words_.size() ? other.words_[i] : 0;
      if (words_[i] & ~ow) return false;
    }
    return true;
  }

  StateSet& unite(const StateSet& other) {
    if (other.size_ > size_) grow(other.size_);
    for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  bool intersects(const StateSet& other) const {
    std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
        fn(wi * 64 + bit);
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> members() const;

  friend bool operator==(const StateSet& a, const StateSet& b) { return a.words_ == b.words_; }
  friend bool operator<(const StateSet& a, const StateSet& b) { return a.words_ < b.words_; }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ull;
    return h;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

// Antichain of minimal StateSets. insert keeps only inclusion-minimal
// elements: an element dominated by an existing one is dropped, and inserting
// a new minimum evicts everything it dominates.
class Antichain {
 public:
  // Returns true when the candidate survived (i.e. it was minimal).
  bool insert(const StateSet& s) {
    for (const auto& t : elems_)
      if (t.subset_of(s)) return false;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < elems_.size(); ++i)
      if (!s.subset_of(elems_[i])) {
        if (keep != i) elems_[keep] = std::move(elems_[i]);
        ++keep;
      }
    elems_.resize(keep);
    elems_.push_back(s);
    return true;
  }

  bool contains_subset_of(const StateSet& s) const {
    for (const auto& t : elems_)
      if (t.subset_of(s)) return true;
    return false;
  }

  const std::vector<StateSet>& elems() const { return elems_; }
  bool empty() const { return elems_.empty(); }
  std::size_t size() const { return elems_.size(); }

 private:
  std::vector<StateSet> elems_;
};

}  // namespace bcaret
