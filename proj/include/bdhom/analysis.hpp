// Column and row analyses of compass structures: shadings and their
// equivalence classes, the dominance order, right-context sets,
// fingerprints, covered points, witnesses, row blueprints, and the
// row-duplicate contraction.

#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdhom/compass.hpp"

namespace bdhom {

// A flat B-sequence in block form: (atom label, exponent) per block.
struct FlatBSequence {
  std::vector<std::pair<int, int>> blocks;

  int length() const {  // |Sh| = sum of exponents
    int n = 0;
    for (auto& b : blocks) n += b.second;
    return n;
  }
  // 1-based positional accessor per the block rule.
  int at(int i) const {
    int acc = 0;
    for (auto& b : blocks) {
      acc += b.second;
      if (i <= acc) return b.first;
    }
    throw std::out_of_range("flat B-sequence index");
  }
  std::vector<int> atom_sequence() const {
    std::vector<int> s;
    s.reserve(blocks.size());
    for (auto& b : blocks) s.push_back(b.first);
    return s;
  }
};

// Interning table for shading classes (the ~ equivalence classes): a class
// is the block-atom sequence with exponents dropped.  Also enumerates every
// chain the solver may guess.
class ShadingClasses {
 public:
  explicit ShadingClasses(const Universe& u) : u_(&u) {}

  const Universe& universe() const { return *u_; }

  int intern(const std::vector<int>& atoms) {
    auto it = index_.find(atoms);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(seqs_.size());
    seqs_.push_back(atoms);
    index_.emplace(atoms, id);
    return id;
  }
  int find(const std::vector<int>& atoms) const {
    auto it = index_.find(atoms);
    return it == index_.end() ? -1 : it->second;
  }

  int size() const { return static_cast<int>(seqs_.size()); }
  const std::vector<int>& sequence(int cls) const { return seqs_[cls]; }
  int atom_at(int cls, int pos) const { return seqs_[cls][pos]; }
  int length(int cls) const { return static_cast<int>(seqs_[cls].size()); }

  // Position of the label inside the class chain; labels within one chain
  // have pairwise distinct delta-up, so search by that value.
  int position_of(int cls, int label) const {
    int d = u_->delta_up(label);
    const auto& seq = seqs_[cls];
    for (size_t i = 0; i < seq.size(); ++i)
      if (u_->delta_up(seq[i]) == d) return static_cast<int>(i);
    return -1;
  }

  // next([Sh], F): successor in the chain, -1 when undefined.
  int next_label(int cls, int label) const {
    int pos = position_of(cls, label);
    if (pos < 0 || pos + 1 >= length(cls)) return -1;
    return seqs_[cls][pos + 1];
  }

 private:
  const Universe* u_;
  std::vector<std::vector<int>> seqs_;
  std::map<std::vector<int>, int> index_;
};

// -- shadings -------------------------------------------------------------

// BD: the column's atom sequence L(x,x)..L(x,N) in block form.
// ABD: one block per delta-up value, sampled at the first row attaining it,
// with the exponent recording how many rows share that value.
inline FlatBSequence shading(const CompassStructure& g, int x) {
  const Universe& u = g.universe();
  FlatBSequence sh;
  for (int y = x; y <= g.N(); ++y) {
    int lbl = g.label(x, y);
    bool same = !sh.blocks.empty() &&
                (u.abd() ? u.delta_up(sh.blocks.back().first) == u.delta_up(lbl)
                         : sh.blocks.back().first == lbl);
    if (same)
      ++sh.blocks.back().second;
    else
      sh.blocks.push_back({lbl, 1});
  }
  return sh;
}

inline bool equiv(const FlatBSequence& a, const FlatBSequence& b) {
  return a.atom_sequence() == b.atom_sequence();
}

inline int class_of(ShadingClasses& classes, const FlatBSequence& sh) {
  return classes.intern(sh.atom_sequence());
}
inline int column_class(const CompassStructure& g, ShadingClasses& classes,
                        int x) {
  return class_of(classes, shading(g, x));
}

// Dominance over equivalent sequences: Sh < Sh' iff |Sh| > |Sh'| and every
// exponent prefix sum of Sh is within the length slack of Sh'.
inline bool dominates(const FlatBSequence& s1, const FlatBSequence& s2) {
  if (!equiv(s1, s2))
    throw std::invalid_argument("dominates: sequences are not equivalent");
  int len1 = s1.length(), len2 = s2.length();
  if (len1 <= len2) return false;
  int slack = len1 - len2;
  int acc1 = 0, acc2 = 0;
  for (size_t i = 0; i < s1.blocks.size(); ++i) {
    acc1 += s1.blocks[i].second;
    acc2 += s2.blocks[i].second;
    if (acc1 > slack + acc2) return false;
  }
  return true;
}

// Checks the FlatBSequence invariants for a run of a valid column:
// first atom initial, ->B steps, Req_D non-decreasing and Prop
// non-increasing upward, and strictly decreasing delta-up across blocks.
inline bool is_decreasing_flat_b_sequence(const Universe& u,
                                          const FlatBSequence& sh) {
  if (sh.blocks.empty()) return false;
  if (u.data(sh.blocks.front().first).req_b.any()) return false;
  for (size_t i = 0; i + 1 < sh.blocks.size(); ++i) {
    int lo = sh.blocks[i].first, hi = sh.blocks[i + 1].first;
    if (lo == hi) return false;
    if (u.delta_up(hi) >= u.delta_up(lo)) return false;
    if (!u.abd() && !u.b_succ(hi, lo)) return false;
    if (!u.data(lo).req_d.subset_of(u.data(hi).req_d)) return false;
    if (!u.data(hi).props.subset_of(u.data(lo).props)) return false;
  }
  return true;
}

// -- fingerprints and covered points ----------------------------------------

using ClassAtomPair = std::pair<int, int>;  // (class id, label)

struct Fingerprint {
  int cls = -1;
  int label = -1;
  std::vector<ClassAtomPair> right;  // sorted set

  bool operator==(const Fingerprint& o) const {
    return cls == o.cls && label == o.label && right == o.right;
  }
};

// S->(x,y): the set of (class, atom) pairs exposed to the right of x on row y.
inline std::vector<ClassAtomPair> s_right(const CompassStructure& g,
                                          ShadingClasses& classes, int x,
                                          int y) {
  std::vector<ClassAtomPair> s;
  for (int x2 = x + 1; x2 <= y; ++x2)
    s.push_back({column_class(g, classes, x2), g.label(x2, y)});
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline Fingerprint fingerprint(const CompassStructure& g,
                               ShadingClasses& classes, int x, int y) {
  return {column_class(g, classes, x), g.label(x, y),
          s_right(g, classes, x, y)};
}

// Covered point: delta-up(L(x,y)) + 1 columns strictly to the right of x on
// row y with an equal fingerprint.
inline bool is_covered(const CompassStructure& g, ShadingClasses& classes,
                       int x, int y) {
  const int needed = g.universe().delta_up(g.label(x, y)) + 1;
  const Fingerprint fp = fingerprint(g, classes, x, y);
  int found = 0;
  for (int x2 = x + 1; x2 <= y && found < needed; ++x2)
    if (fingerprint(g, classes, x2, y) == fp) ++found;
  return found >= needed;
}

inline std::vector<int> witnesses(const CompassStructure& g,
                                  ShadingClasses& classes, int y) {
  std::vector<int> w;
  for (int x = 0; x <= y; ++x)
    if (!is_covered(g, classes, x, y)) w.push_back(x);
  return w;
}

struct RowBlueprint {
  std::vector<ClassAtomPair> pairs;
  bool operator==(const RowBlueprint& o) const { return pairs == o.pairs; }
  bool operator!=(const RowBlueprint& o) const { return pairs != o.pairs; }
};

inline RowBlueprint row_blueprint(const CompassStructure& g,
                                  ShadingClasses& classes, int y) {
  RowBlueprint bp;
  for (int x : witnesses(g, classes, y))
    bp.pairs.push_back({column_class(g, classes, x), g.label(x, y)});
  return bp;
}

// Blueprint dump: one "classId:atomId" token per witness.
inline std::string blueprint_dump(const RowBlueprint& bp) {
  std::string out;
  for (size_t i = 0; i < bp.pairs.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(bp.pairs[i].first) + ":" +
           std::to_string(bp.pairs[i].second);
  }
  return out;
}

// Coverage recomputed purely on a pair sequence (solver step 6): position i
// is covered iff delta-up + 1 later positions carry the same pair and see
// the same set of pairs to their right.
inline bool is_covered_in_sequence(const Universe& u,
                                   const std::vector<ClassAtomPair>& seq,
                                   int i) {
  const int n = static_cast<int>(seq.size());
  std::vector<std::vector<ClassAtomPair>> right(n + 1);
  for (int j = n - 1; j >= 0; --j) {
    right[j] = right[j + 1];
    right[j].push_back(seq[j]);
    std::sort(right[j].begin(), right[j].end());
    right[j].erase(std::unique(right[j].begin(), right[j].end()),
                   right[j].end());
  }
  const int needed = u.delta_up(seq[i].second) + 1;
  int found = 0;
  for (int j = i + 1; j < n && found < needed; ++j)
    if (seq[j] == seq[i] && right[j + 1] == right[i + 1]) ++found;
  return found >= needed;
}

// -- contraction ----------------------------------------------------------

// Cuts the grid between rows y and y2 (equal blueprints), rerouting columns
// <= y through their closest matching witness and the row bijection.
inline CompassStructure contract(const CompassStructure& g,
                                 ShadingClasses& classes, int y, int y2) {
  if (!(0 <= y && y < y2 && y2 <= g.N()))
    throw std::invalid_argument("contract: need 0 <= y < y2 <= N");
  const std::vector<int> wy = witnesses(g, classes, y);
  const std::vector<int> wy2 = witnesses(g, classes, y2);
  if (wy.size() != wy2.size())
    throw std::invalid_argument("contract: blueprints differ in length");
  for (size_t j = 0; j < wy.size(); ++j) {
    if (column_class(g, classes, wy[j]) != column_class(g, classes, wy2[j]) ||
        g.label(wy[j], y) != g.label(wy2[j], y2))
      throw std::invalid_argument("contract: blueprints differ");
    if (s_right(g, classes, wy[j], y) != s_right(g, classes, wy2[j], y2))
      throw std::invalid_argument("contract: right-context sets differ");
  }

  // b-bar maps the j-th witness of row y to the j-th witness of row y2.
  std::map<int, int> bbar;
  for (size_t j = 0; j < wy.size(); ++j) bbar[wy[j]] = wy2[j];

  // Closest_wit: the nearest witness to the right with an equal fingerprint.
  std::vector<int> closest(y + 1, -1);
  for (int x = 0; x <= y; ++x) {
    if (bbar.count(x)) {
      closest[x] = x;
      continue;
    }
    Fingerprint fp = fingerprint(g, classes, x, y);
    for (int x2 : wy) {
      if (x2 > x && fingerprint(g, classes, x2, y) == fp) {
        closest[x] = x2;
        break;
      }
    }
    if (closest[x] < 0)
      throw std::logic_error("contract: covered column without a witness");
  }

  const int delta = y2 - y;
  const int N2 = g.N() - delta;
  CompassStructure out(g.universe(), N2);
  for (int yy = 0; yy <= N2; ++yy)
    for (int xx = 0; xx <= yy; ++xx) {
      int lbl;
      if (yy <= y)
        lbl = g.label(xx, yy);
      else if (xx > y)
        lbl = g.label(xx + delta, yy + delta);
      else
        lbl = g.label(bbar.at(closest[xx]), yy + delta);
      out.set_label(xx, yy, lbl);
    }
  return out;
}

// Repeatedly contracts the first duplicate-blueprint row pair until all row
// blueprints are pairwise distinct.
inline CompassStructure contract_to_fixpoint(CompassStructure g,
                                             ShadingClasses& classes) {
  for (;;) {
    bool changed = false;
    std::map<std::string, int> seen;
    for (int y = 0; y <= g.N() && !changed; ++y) {
      std::string key = blueprint_dump(row_blueprint(g, classes, y));
      auto it = seen.find(key);
      if (it != seen.end()) {
        g = contract(g, classes, it->second, y);
        changed = true;
      } else {
        seen.emplace(std::move(key), y);
      }
    }
    if (!changed) return g;
  }
}

}  // namespace bdhom
