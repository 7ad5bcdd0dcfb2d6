// Small dynamic bitset used for atom membership and request sets.

#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

#if defined(__GNUC__) || defined(__clang__)
#include <bit>
#endif

namespace bdhom {

class Bits {
 public:
  Bits() = default;
  explicit Bits(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  int size() const { return nbits_; }

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  void assign(int i, bool v) {
    if (v) set(i); else reset(i);
  }

  bool any() const {
    for (uint64_t x : w_)
      if (x) return true;
    return false;
  }
  bool none() const { return !any(); }

  int count() const {
    int c = 0;
    for (uint64_t x : w_) c += std::popcount(x);
    return c;
  }

  Bits operator|(const Bits& o) const {
    Bits r = *this;
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] |= o.w_[i];
    return r;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] &= o.w_[i];
    return r;
  }
  Bits& operator|=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bits& operator&=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  // set difference: bits in *this but not in o
  Bits minus(const Bits& o) const {
    Bits r = *this;
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] &= ~o.w_[i];
    return r;
  }

  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  bool operator==(const Bits& o) const { return w_ == o.w_; }
  bool operator!=(const Bits& o) const { return w_ != o.w_; }
  bool operator<(const Bits& o) const { return w_ < o.w_; }

  size_t hash() const {
    size_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<size_t>(nbits_);
    for (uint64_t x : w_) h = (h ^ x) * 0x100000001b3ULL;
    return h;
  }

 private:
  int nbits_ = 0;
  std::vector<uint64_t> w_;
};

struct BitsHash {
  size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace bdhom
