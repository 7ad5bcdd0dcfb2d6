// Formula AST for the interval logics BD and ABD.
//
// Stored nodes use only the primitive kinds (prop, not, or, <B>, <D>, <A>,
// top); all sugar (&, ->, <->, [B], [D], [A], F, pi, [G], <G>) is expanded
// by the factory functions below.  Nodes are immutable and shared; negation
// is canonicalized so that neg(not(x)) == x.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

namespace bdhom {

enum class Kind : uint8_t {
  Top,
  Prop,
  Not,
  Or,
  DiamondB,
  DiamondD,
  DiamondA,
};

enum class Dialect : uint8_t { BD, ABD };

inline const char* dialect_name(Dialect d) {
  return d == Dialect::BD ? "bd" : "abd";
}

struct FormulaNode;
using FormulaPtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Kind kind = Kind::Top;
  std::string letter;  // Prop only
  FormulaPtr left;     // unary child / left disjunct
  FormulaPtr right;    // right disjunct
  size_t hash = 0;
  uint32_t size = 1;  // node count of this subtree
};

class Formula {
 public:
  Formula() = default;
  explicit Formula(FormulaPtr node) : node_(std::move(node)) {}

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  const std::string& letter() const { return node_->letter; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  size_t hash() const { return node_->hash; }
  uint32_t size() const { return node_->size; }
  const FormulaNode* raw() const { return node_.get(); }
  const FormulaPtr& ptr() const { return node_; }

  bool operator==(const Formula& o) const {
    return equal(node_.get(), o.node_.get());
  }
  bool operator!=(const Formula& o) const { return !(*this == o); }

  static bool equal(const FormulaNode* a, const FormulaNode* b) {
    if (a == b) return true;
    if (a == nullptr || b == nullptr) return false;
    if (a->hash != b->hash || a->kind != b->kind) return false;
    switch (a->kind) {
      case Kind::Top:
        return true;
      case Kind::Prop:
        return a->letter == b->letter;
      case Kind::Not:
      case Kind::DiamondB:
      case Kind::DiamondD:
      case Kind::DiamondA:
        return equal(a->left.get(), b->left.get());
      case Kind::Or:
        return equal(a->left.get(), b->left.get()) &&
               equal(a->right.get(), b->right.get());
    }
    return false;
  }

 private:
  FormulaPtr node_;
};

namespace detail {
inline size_t hash_mix(size_t a, size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}
}  // namespace detail

// -- factories --------------------------------------------------------------

inline Formula top() {
  static const Formula t = [] {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Top;
    n->hash = 0x7093f3a5u;
    n->size = 1;
    return Formula(n);
  }();
  return t;
}

inline Formula prop(const std::string& name) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = Kind::Prop;
  n->letter = name;
  n->hash = detail::hash_mix(1, std::hash<std::string>{}(name));
  n->size = 1;
  return Formula(n);
}

inline Formula make_unary(Kind k, const Formula& c) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->left = c.ptr();
  n->hash = detail::hash_mix(static_cast<size_t>(k) + 17, c.hash());
  n->size = c.size() + 1;
  return Formula(n);
}

inline Formula make_binary(Kind k, const Formula& a, const Formula& b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->left = a.ptr();
  n->right = b.ptr();
  n->hash = detail::hash_mix(
      detail::hash_mix(static_cast<size_t>(k) + 31, a.hash()), b.hash());
  n->size = a.size() + b.size() + 1;
  return Formula(n);
}

// not_ collapses double negation so closure pairing is an involution.
inline Formula not_(const Formula& c) {
  if (c.kind() == Kind::Not) return c.left();
  return make_unary(Kind::Not, c);
}

inline Formula or_(const Formula& a, const Formula& b) {
  return make_binary(Kind::Or, a, b);
}
inline Formula diamond_b(const Formula& c) { return make_unary(Kind::DiamondB, c); }
inline Formula diamond_d(const Formula& c) { return make_unary(Kind::DiamondD, c); }
inline Formula diamond_a(const Formula& c) { return make_unary(Kind::DiamondA, c); }

inline Formula bottom() { return not_(top()); }
inline Formula and_(const Formula& a, const Formula& b) {
  return not_(or_(not_(a), not_(b)));
}
inline Formula implies(const Formula& a, const Formula& b) {
  return or_(not_(a), b);
}
inline Formula iff(const Formula& a, const Formula& b) {
  return and_(implies(a, b), implies(b, a));
}
inline Formula box_b(const Formula& c) { return not_(diamond_b(not_(c))); }
inline Formula box_d(const Formula& c) { return not_(diamond_d(not_(c))); }
inline Formula box_a(const Formula& c) { return not_(diamond_a(not_(c))); }
inline Formula pi() { return box_b(bottom()); }  // == not(diamond_b(top))

// [G]x = x & [B]x & [A]x & [B][A]x -- reaches every subinterval of [0,N].
inline Formula box_g(const Formula& c) {
  return and_(c, and_(box_b(c), and_(box_a(c), box_b(box_a(c)))));
}
inline Formula diamond_g(const Formula& c) { return not_(box_g(not_(c))); }

inline bool uses_diamond_a(const Formula& f) {
  switch (f.kind()) {
    case Kind::DiamondA:
      return true;
    case Kind::Not:
    case Kind::DiamondB:
    case Kind::DiamondD:
      return uses_diamond_a(f.left());
    case Kind::Or:
      return uses_diamond_a(f.left()) || uses_diamond_a(f.right());
    default:
      return false;
  }
}

inline Dialect dialect_of(const Formula& f) {
  return uses_diamond_a(f) ? Dialect::ABD : Dialect::BD;
}

// -- printing ---------------------------------------------------------------
//
// Prints only primitive connectives (!, |, <B>, <D>, <A>, T); the output
// parses back to a structurally identical formula.

inline void print_formula(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Top:
      out += "T";
      return;
    case Kind::Prop:
      out += f.letter();
      return;
    case Kind::Not:
      out += "!";
      print_formula(f.left(), out);
      return;
    case Kind::DiamondB:
      out += "<B> ";
      print_formula(f.left(), out);
      return;
    case Kind::DiamondD:
      out += "<D> ";
      print_formula(f.left(), out);
      return;
    case Kind::DiamondA:
      out += "<A> ";
      print_formula(f.left(), out);
      return;
    case Kind::Or:
      out += "(";
      print_formula(f.left(), out);
      out += " | ";
      print_formula(f.right(), out);
      out += ")";
      return;
  }
}

inline std::string print_formula(const Formula& f) {
  std::string s;
  print_formula(f, s);
  return s;
}

}  // namespace bdhom
