// Atoms over a closure: enumeration, the Req/Obs/Box projections, the
// successor relations ->B and ->D, reflexivity, and the potential function
// delta-up.  For the ABD dialect, marked atoms pair a base atom with a
// marking of each <A>-argument as pending / satisfied / forbidden.
//
// Membership is a bitvector over closure pairs (bit = positive rep in the
// atom).  Only letters and modal members are free; disjunction members are
// derived bottom-up, so every enumerated bitvector is an atom by
// construction.

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bdhom/bits.hpp"
#include "bdhom/closure.hpp"

namespace bdhom {

enum class Mark : uint8_t { Pending = 0, Satisfied = 1, Forbidden = 2 };

inline char mark_char(Mark m) {
  switch (m) {
    case Mark::Pending: return '?';
    case Mark::Satisfied: return '+';
    default: return '-';
  }
}

class EnumerationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AtomData {
  Bits membership;  // over pairs
  Bits req_b, obs_b, req_d, obs_d, req_a, obs_a;  // over modality slots
  Bits props;       // over letter slots
  int delta_up = 0;  // BD value; marked atoms add their pending count
  bool is_point = false;   // [B]F in the atom
  bool initial = false;    // Req_B empty
  bool b_reflexive = false;
  bool d_reflexive = false;
};

// Marking key: 2 bits per <A>-argument slot.
using AlphaKey = uint64_t;

struct MarkedAtomData {
  uint32_t base = 0;  // index into AtomTable
  AlphaKey alpha = 0;
  int delta_up = 0;  // base delta-up + pending count
  bool final_ = false;
};

inline Mark alpha_get(AlphaKey a, int slot) {
  return static_cast<Mark>((a >> (2 * slot)) & 3u);
}
inline AlphaKey alpha_set(AlphaKey a, int slot, Mark m) {
  a &= ~(AlphaKey(3) << (2 * slot));
  return a | (AlphaKey(static_cast<uint8_t>(m)) << (2 * slot));
}

class AtomTable {
 public:
  // Enumerates all atoms of the closure.  free_bit_cap bounds the number of
  // free (letter + modal) pairs; beyond it, explicit enumeration is refused.
  explicit AtomTable(const ClosureTable& cl, int free_bit_cap = 24) : cl_(&cl) {
    std::vector<int> free_pairs;
    for (int p = 0; p < cl.pair_count(); ++p) {
      Kind k = cl.rep(p).kind();
      if (k == Kind::Prop || k == Kind::DiamondB || k == Kind::DiamondD ||
          k == Kind::DiamondA)
        free_pairs.push_back(p);
    }
    if (static_cast<int>(free_pairs.size()) > free_bit_cap)
      throw EnumerationCapError(
          "closure has " + std::to_string(free_pairs.size()) +
          " free pairs, above the enumeration cap of " +
          std::to_string(free_bit_cap));

    const uint64_t total = uint64_t(1) << free_pairs.size();
    for (uint64_t mask = 0; mask < total; ++mask) {
      Bits m(cl.pair_count());
      for (size_t i = 0; i < free_pairs.size(); ++i)
        if ((mask >> i) & 1u) m.set(free_pairs[i]);
      // Disjunctions are determined by their parts (pairs are in
      // children-first order, so one pass suffices).
      for (const auto& op : cl.or_pairs())
        m.assign(op.pair, eval_ref(m, op.left) || eval_ref(m, op.right));
      if (!point_box_a_ok(m)) continue;
      add_atom(std::move(m));
    }
  }

  const ClosureTable& closure() const { return *cl_; }
  int size() const { return static_cast<int>(atoms_.size()); }
  const AtomData& operator[](int idx) const { return atoms_[idx]; }

  // Truth of a closure member/constant inside an atom membership vector.
  static bool eval_ref(const Bits& membership, const ArgRef& r) {
    switch (r.tag) {
      case ArgRef::Tag::ConstTrue: return true;
      case ArgRef::Tag::ConstFalse: return false;
      default: return membership.test(r.pair) != r.negated;
    }
  }

  bool contains(int atom, const ArgRef& r) const {
    return eval_ref(atoms_[atom].membership, r);
  }
  bool contains(int atom, const Formula& f) const {
    return contains(atom, cl_->resolve(f));
  }

  int find(const Bits& membership) const {
    auto it = index_.find(membership);
    return it == index_.end() ? -1 : it->second;
  }

  // Derives the unique atom with the given request sets and letters
  // (Proposition-style determinacy).  Returns -1 if it is not an atom of
  // this closure (cannot happen for consistent inputs).
  int derive(const Bits& req_b, const Bits& req_d, const Bits& req_a,
             const Bits& props) const {
    Bits m(cl_->pair_count());
    const auto fill = [&m](const std::vector<ModalSlot>& slots, const Bits& req) {
      for (size_t s = 0; s < slots.size(); ++s)
        if (req.test(static_cast<int>(s))) m.set(slots[s].pair);
    };
    fill(cl_->b_slots(), req_b);
    fill(cl_->d_slots(), req_d);
    fill(cl_->a_slots(), req_a);
    const auto& letters = cl_->letter_pairs();
    for (size_t i = 0; i < letters.size(); ++i)
      if (props.test(static_cast<int>(i))) m.set(letters[i]);
    for (const auto& op : cl_->or_pairs())
      m.assign(op.pair, eval_ref(m, op.left) || eval_ref(m, op.right));
    return find(m);
  }

  // -- relations ------------------------------------------------------------

  // F ->B G  iff  Req_B(F) = Req_B(G) u Obs_B(G)
  bool b_succ(int f, int g) const {
    return atoms_[f].req_b == (atoms_[g].req_b | atoms_[g].obs_b);
  }
  // F ->D G  iff  Req_D(F) >= Req_D(G) u Obs_D(G)
  bool d_succ(int f, int g) const {
    return (atoms_[g].req_d | atoms_[g].obs_d).subset_of(atoms_[f].req_d);
  }
  bool is_b_reflexive(int a) const { return atoms_[a].b_reflexive; }
  bool is_d_reflexive(int a) const { return atoms_[a].d_reflexive; }

  // Box_R(F) over slots: bit s set iff [R]~psi_s in F, i.e. <R>psi_s not in F.
  Bits box(int atom, Kind modality) const {
    const auto& slots = cl_->slots(modality);
    const Bits& req = modality == Kind::DiamondB   ? atoms_[atom].req_b
                      : modality == Kind::DiamondD ? atoms_[atom].req_d
                                                   : atoms_[atom].req_a;
    Bits b(static_cast<int>(slots.size()));
    for (size_t s = 0; s < slots.size(); ++s)
      if (!req.test(static_cast<int>(s))) b.set(static_cast<int>(s));
    return b;
  }

  const Bits& req(int atom, Kind modality) const {
    const AtomData& a = atoms_[atom];
    return modality == Kind::DiamondB ? a.req_b
           : modality == Kind::DiamondD ? a.req_d
                                        : a.req_a;
  }
  const Bits& obs(int atom, Kind modality) const {
    const AtomData& a = atoms_[atom];
    return modality == Kind::DiamondB ? a.obs_b
           : modality == Kind::DiamondD ? a.obs_d
                                        : a.obs_a;
  }

  // Debug dump: one atom per line as a sorted closure-member list.
  std::string dump_atom(int idx) const {
    std::vector<std::string> names;
    const Bits& m = atoms_[idx].membership;
    for (int p = 0; p < cl_->pair_count(); ++p)
      names.push_back(m.test(p) ? print_formula(cl_->rep(p))
                                : print_formula(not_(cl_->rep(p))));
    std::sort(names.begin(), names.end());
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
      if (i) out += ", ";
      out += names[i];
    }
    return out;
  }

 private:
  bool point_box_a_ok(const Bits& m) const {
    // At point atoms, [A]psi in F forces psi in F (every meeting interval of
    // a point includes the point itself).
    if (m.test(cl_->b_top_pair())) return true;  // not a point
    for (const auto& slot : cl_->a_slots())
      if (!m.test(slot.pair) && eval_ref(m, slot.arg)) return false;
    return true;
  }

  void add_atom(Bits m) {
    AtomData a;
    const auto project = [&](const std::vector<ModalSlot>& slots, Bits& req,
                             Bits& obs) {
      req = Bits(static_cast<int>(slots.size()));
      obs = Bits(static_cast<int>(slots.size()));
      for (size_t s = 0; s < slots.size(); ++s) {
        if (m.test(slots[s].pair)) req.set(static_cast<int>(s));
        if (eval_ref(m, slots[s].arg)) obs.set(static_cast<int>(s));
      }
    };
    project(cl_->b_slots(), a.req_b, a.obs_b);
    project(cl_->d_slots(), a.req_d, a.obs_d);
    project(cl_->a_slots(), a.req_a, a.obs_a);
    const auto& letters = cl_->letter_pairs();
    a.props = Bits(static_cast<int>(letters.size()));
    for (size_t i = 0; i < letters.size(); ++i)
      if (m.test(letters[i])) a.props.set(static_cast<int>(i));
    a.is_point = !m.test(cl_->b_top_pair());
    a.initial = a.req_b.none();
    a.b_reflexive = a.obs_b.subset_of(a.req_b);
    a.d_reflexive = a.obs_d.subset_of(a.req_d);
    a.delta_up = delta_up_value(
        static_cast<int>(cl_->b_slots().size()), a.req_b.count(),
        a.obs_b.minus(a.req_b).count(), static_cast<int>(cl_->d_slots().size()),
        a.req_d.count(), static_cast<int>(letters.size()),
        static_cast<int>(letters.size()) - a.props.count());
    a.membership = std::move(m);
    index_.emplace(a.membership, static_cast<int>(atoms_.size()));
    atoms_.push_back(std::move(a));
  }

 public:
  // The three-part sum, exposed so the arithmetic is testable on its own:
  //   (2 nB - 2|Req_B| - |Obs_B \ Req_B|) + (nD - |Req_D|)
  //     + (#letters - #negative letters)
  static int delta_up_value(int b_args, int req_b, int obs_b_minus_req,
                            int d_args, int req_d, int letters,
                            int negative_letters) {
    return (2 * b_args - 2 * req_b - obs_b_minus_req) + (d_args - req_d) +
           (letters - negative_letters);
  }

 private:
  const ClosureTable* cl_;
  std::vector<AtomData> atoms_;
  std::unordered_map<Bits, int, BitsHash> index_;
};

// -- marked atoms (ABD) -------------------------------------------------------

class MarkedAtomTable {
 public:
  explicit MarkedAtomTable(const AtomTable& atoms, uint64_t cap = 1u << 22)
      : atoms_(&atoms) {
    const ClosureTable& cl = atoms.closure();
    const int na = static_cast<int>(cl.a_slots().size());
    if (na > 32)
      throw EnumerationCapError("more than 32 <A>-arguments");
    for (int base = 0; base < atoms.size(); ++base) {
      const AtomData& f = atoms[base];
      // Per-slot admissible marks.
      std::vector<std::vector<Mark>> choices(na);
      for (int s = 0; s < na; ++s) {
        bool arg_in_f = AtomTable::eval_ref(f.membership, cl.a_slots()[s].arg);
        if (arg_in_f) {
          choices[s] = {Mark::Satisfied};
        } else if (f.is_point) {
          choices[s] = {f.req_a.test(s) ? Mark::Pending : Mark::Forbidden};
        } else {
          choices[s] = {Mark::Pending, Mark::Satisfied, Mark::Forbidden};
        }
      }
      std::vector<int> pick(na, 0);
      while (true) {
        AlphaKey alpha = 0;
        int pending = 0;
        for (int s = 0; s < na; ++s) {
          Mark mk = choices[s][pick[s]];
          alpha = alpha_set(alpha, s, mk);
          if (mk == Mark::Pending) ++pending;
        }
        MarkedAtomData d;
        d.base = static_cast<uint32_t>(base);
        d.alpha = alpha;
        d.delta_up = f.delta_up + pending;
        d.final_ = pending == 0;
        index_.emplace(key(base, alpha), static_cast<int>(marked_.size()));
        marked_.push_back(d);
        if (marked_.size() > cap)
          throw EnumerationCapError("marked-atom enumeration cap exceeded");
        int s = na - 1;
        while (s >= 0 && pick[s] + 1 == static_cast<int>(choices[s].size()))
          pick[s--] = 0;
        if (s < 0) break;
        ++pick[s];
      }
    }
  }

  const AtomTable& atoms() const { return *atoms_; }
  int size() const { return static_cast<int>(marked_.size()); }
  const MarkedAtomData& operator[](int idx) const { return marked_[idx]; }

  int find(int base, AlphaKey alpha) const {
    auto it = index_.find(key(base, alpha));
    return it == index_.end() ? -1 : it->second;
  }

  bool is_final(int idx) const { return marked_[idx].final_; }

  // Marked ->B: base condition plus marking transition (upper F_a, lower G_b):
  // satisfied / forbidden marks are sticky; a pending mark becomes satisfied
  // exactly when the argument enters the upper atom.
  bool b_succ(int f, int g) const {
    const MarkedAtomData& fa = marked_[f];
    const MarkedAtomData& gb = marked_[g];
    if (!atoms_->b_succ(static_cast<int>(fa.base), static_cast<int>(gb.base)))
      return false;
    return alpha_matches_step(fa.alpha, gb.alpha, static_cast<int>(fa.base));
  }

  // Expected upper marking for a pending/sticky step onto base atom
  // `upper_base`, given the lower marking.
  AlphaKey step_alpha(AlphaKey lower, int upper_base) const {
    const ClosureTable& cl = atoms_->closure();
    AlphaKey out = 0;
    for (int s = 0; s < static_cast<int>(cl.a_slots().size()); ++s) {
      Mark m = alpha_get(lower, s);
      if (m == Mark::Pending &&
          AtomTable::eval_ref((*atoms_)[upper_base].membership,
                              cl.a_slots()[s].arg))
        m = Mark::Satisfied;
      out = alpha_set(out, s, m);
    }
    return out;
  }

  bool alpha_matches_step(AlphaKey upper, AlphaKey lower, int upper_base) const {
    return upper == step_alpha(lower, upper_base);
  }

  // Validity of a (base, alpha) combination against the marked-atom rules.
  bool alpha_valid_for(int base, AlphaKey alpha) const {
    return find(base, alpha) >= 0;
  }

  std::string dump(int idx) const {
    const ClosureTable& cl = atoms_->closure();
    std::string out = atoms_->dump_atom(static_cast<int>(marked_[idx].base));
    for (int s = 0; s < static_cast<int>(cl.a_slots().size()); ++s) {
      out += " |";
      out += mark_char(alpha_get(marked_[idx].alpha, s));
      out += "A:";
      ArgRef a = cl.a_slots()[s].arg;
      out += a.tag == ArgRef::Tag::ConstTrue    ? "T"
             : a.tag == ArgRef::Tag::ConstFalse ? "F"
             : print_formula(a.negated ? not_(cl.rep(a.pair)) : cl.rep(a.pair));
    }
    return out;
  }

 private:
  static uint64_t key(int base, AlphaKey alpha) {
    return (static_cast<uint64_t>(base) << 48) ^ alpha;
  }

  const AtomTable* atoms_;
  std::vector<MarkedAtomData> marked_;
  std::unordered_map<uint64_t, int> index_;
};

// A label universe: the dialect-aware atom space the compass and solver work
// in.  Label ids index base atoms (BD) or marked atoms (ABD).
class Universe {
 public:
  Universe(const Formula& phi, Dialect dialect, int free_bit_cap = 24)
      : cl_(phi, dialect),
        atoms_(cl_, free_bit_cap),
        marked_(dialect == Dialect::ABD
                    ? std::make_unique<MarkedAtomTable>(atoms_)
                    : nullptr) {}

  const ClosureTable& closure() const { return cl_; }
  const AtomTable& atoms() const { return atoms_; }
  const MarkedAtomTable& marked() const { return *marked_; }
  Dialect dialect() const { return marked_ ? Dialect::ABD : Dialect::BD; }
  bool abd() const { return marked_ != nullptr; }

  int label_count() const { return abd() ? marked_->size() : atoms_.size(); }
  int base_of(int label) const {
    return abd() ? static_cast<int>((*marked_)[label].base) : label;
  }
  AlphaKey alpha_of(int label) const {
    return abd() ? (*marked_)[label].alpha : 0;
  }
  const AtomData& data(int label) const { return atoms_[base_of(label)]; }
  int delta_up(int label) const {
    return abd() ? (*marked_)[label].delta_up : atoms_[label].delta_up;
  }
  bool is_final(int label) const { return !abd() || marked_->is_final(label); }
  bool contains(int label, const ArgRef& r) const {
    return atoms_.contains(base_of(label), r);
  }
  bool b_succ(int f, int g) const {
    return abd() ? marked_->b_succ(f, g) : atoms_.b_succ(f, g);
  }
  bool d_succ(int f, int g) const {
    return atoms_.d_succ(base_of(f), base_of(g));
  }
  int find_label(int base, AlphaKey alpha) const {
    return abd() ? marked_->find(base, alpha) : base;
  }
  std::string dump_label(int label) const {
    return abd() ? marked_->dump(label) : atoms_.dump_atom(label);
  }

 private:
  ClosureTable cl_;
  AtomTable atoms_;
  std::unique_ptr<MarkedAtomTable> marked_;
};

}  // namespace bdhom
