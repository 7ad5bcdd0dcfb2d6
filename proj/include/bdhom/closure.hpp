// Closure of a formula: all subformulas and their negations, plus <B>T and
// [B]F.  Members are stored as complement pairs; member index 2i is the
// pair's positive representative (never a negation), 2i+1 its complement.
// T and F themselves are not stored: T is implicitly true in every atom.

#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bdhom/formula.hpp"

namespace bdhom {

// Resolves a closure formula to either a constant or a pair reference.
struct ArgRef {
  enum class Tag : uint8_t { ConstTrue, ConstFalse, Member } tag;
  int pair = -1;         // Member only
  bool negated = false;  // Member only

  static ArgRef const_true() { return {Tag::ConstTrue, -1, false}; }
  static ArgRef const_false() { return {Tag::ConstFalse, -1, false}; }
  static ArgRef member(int pair, bool neg) { return {Tag::Member, pair, neg}; }
};

// One modal request slot: the closure member <R>psi and its argument.
struct ModalSlot {
  int pair;    // pair index of the <R>psi member itself
  ArgRef arg;  // psi
};

class ClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ClosureTable {
 public:
  ClosureTable(const Formula& phi, Dialect dialect)
      : phi_(phi), dialect_(dialect) {
    collect(phi);
    subformula_count_ = static_cast<int>(pairs_.size());
    // <B>T and [B]F are always members, paired with each other.
    Formula bt = diamond_b(top());
    if (find_pair(bt) < 0) add_pair(bt);
    b_top_pair_ = find_pair(bt);

    for (int p = 0; p < static_cast<int>(pairs_.size()); ++p) {
      const Formula& rep = pairs_[p];
      switch (rep.kind()) {
        case Kind::Prop:
          letter_pairs_.push_back(p);
          break;
        case Kind::DiamondB:
          b_slots_.push_back({p, resolve(rep.left())});
          break;
        case Kind::DiamondD:
          d_slots_.push_back({p, resolve(rep.left())});
          break;
        case Kind::DiamondA:
          a_slots_.push_back({p, resolve(rep.left())});
          break;
        case Kind::Or:
          or_pairs_.push_back({p, resolve(rep.left()), resolve(rep.right())});
          break;
        default:
          break;
      }
    }
    phi_ref_ = resolve(phi);
  }

  const Formula& phi() const { return phi_; }
  Dialect dialect() const { return dialect_; }

  int pair_count() const { return static_cast<int>(pairs_.size()); }
  int member_count() const { return 2 * pair_count(); }
  // |phi| = |CL| / 2, the paper's size measure.
  int phi_size() const { return pair_count(); }
  int subformula_count() const { return subformula_count_; }

  const Formula& rep(int pair) const { return pairs_[pair]; }
  Formula member(int idx) const {
    Formula r = pairs_[idx >> 1];
    return (idx & 1) ? not_(r) : r;
  }
  static int complement(int member_idx) { return member_idx ^ 1; }

  int b_top_pair() const { return b_top_pair_; }

  const std::vector<int>& letter_pairs() const { return letter_pairs_; }
  const std::vector<ModalSlot>& slots(Kind modality) const {
    switch (modality) {
      case Kind::DiamondB: return b_slots_;
      case Kind::DiamondD: return d_slots_;
      default: return a_slots_;
    }
  }
  const std::vector<ModalSlot>& b_slots() const { return b_slots_; }
  const std::vector<ModalSlot>& d_slots() const { return d_slots_; }
  const std::vector<ModalSlot>& a_slots() const { return a_slots_; }

  struct OrPair {
    int pair;
    ArgRef left, right;
  };
  const std::vector<OrPair>& or_pairs() const { return or_pairs_; }

  const ArgRef& phi_ref() const { return phi_ref_; }

  // Maps an arbitrary formula to a constant or closure member.
  // Throws if the formula is not in the closure.
  ArgRef resolve(const Formula& f) const {
    if (f.kind() == Kind::Top) return ArgRef::const_true();
    if (f.kind() == Kind::Not && f.left().kind() == Kind::Top)
      return ArgRef::const_false();
    bool neg = f.kind() == Kind::Not;
    int p = find_pair(neg ? f.left() : f);
    if (p < 0)
      throw ClosureError("formula not in closure: " + print_formula(f));
    return ArgRef::member(p, neg);
  }

  // Member index (0..2P-1) of a closure formula.
  int member_index(const Formula& f) const {
    ArgRef r = resolve(f);
    if (r.tag != ArgRef::Tag::Member)
      throw ClosureError("T/F are not stored closure members");
    return 2 * r.pair + (r.negated ? 1 : 0);
  }

 private:
  void collect(const Formula& f) {
    if (f.kind() == Kind::Top) return;
    if (f.kind() == Kind::Not && f.left().kind() == Kind::Top) return;
    switch (f.kind()) {
      case Kind::Prop:
        add_pair_if_new(f);
        return;
      case Kind::Not:
        collect(f.left());  // rep added by the child
        return;
      case Kind::Or:
        collect(f.left());
        collect(f.right());
        add_pair_if_new(f);
        return;
      case Kind::DiamondB:
      case Kind::DiamondD:
      case Kind::DiamondA:
        collect(f.left());
        add_pair_if_new(f);
        return;
      default:
        return;
    }
  }

  void add_pair_if_new(const Formula& rep) {
    if (find_pair(rep) < 0) add_pair(rep);
  }

  void add_pair(const Formula& rep) {
    int idx = static_cast<int>(pairs_.size());
    pairs_.push_back(rep);
    lookup_[rep.hash()].push_back(idx);
  }

  int find_pair(const Formula& rep) const {
    auto it = lookup_.find(rep.hash());
    if (it == lookup_.end()) return -1;
    for (int idx : it->second)
      if (pairs_[idx] == rep) return idx;
    return -1;
  }

  Formula phi_;
  Dialect dialect_;
  int subformula_count_ = 0;
  int b_top_pair_ = -1;
  std::vector<Formula> pairs_;
  std::unordered_map<size_t, std::vector<int>> lookup_;
  std::vector<int> letter_pairs_;
  std::vector<ModalSlot> b_slots_, d_slots_, a_slots_;
  std::vector<OrPair> or_pairs_;
  ArgRef phi_ref_ = ArgRef::const_true();
};

}  // namespace bdhom
