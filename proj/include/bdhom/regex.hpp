// Restricted star-free generalized regular expressions (prefix/infix
// fragment): parser, language membership, translation to BD formulas, and
// emptiness through the satisfiability solver.
//
// Expression syntax: `%` empty language, letters as identifiers, `~e`
// complement, `e + e` union, `Pre(e)`, `Inf(e)`; the alphabet is declared
// on the first input line as `alphabet: a b ...`.  The empty word is
// excluded throughout: languages live in Sigma+.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bdhom/solver.hpp"

namespace bdhom {

enum class ExprKind : uint8_t { Empty, Letter, Not, Union, Pre, Inf };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  int letter = -1;  // Letter only (index into the alphabet)
  ExprPtr left, right;
};

inline ExprPtr expr_empty() {
  return std::make_shared<ExprNode>(ExprNode{ExprKind::Empty});
}
inline ExprPtr expr_letter(int a) {
  return std::make_shared<ExprNode>(ExprNode{ExprKind::Letter, a});
}
inline ExprPtr expr_not(ExprPtr e) {
  return std::make_shared<ExprNode>(ExprNode{ExprKind::Not, -1, std::move(e)});
}
inline ExprPtr expr_union(ExprPtr a, ExprPtr b) {
  return std::make_shared<ExprNode>(
      ExprNode{ExprKind::Union, -1, std::move(a), std::move(b)});
}
inline ExprPtr expr_pre(ExprPtr e) {
  return std::make_shared<ExprNode>(ExprNode{ExprKind::Pre, -1, std::move(e)});
}
inline ExprPtr expr_inf(ExprPtr e) {
  return std::make_shared<ExprNode>(ExprNode{ExprKind::Inf, -1, std::move(e)});
}

struct RestrictedExpr {
  std::vector<std::string> alphabet;
  ExprPtr root;

  int letter_index(const std::string& name) const {
    for (size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline std::string print_expr(const ExprPtr& e,
                              const std::vector<std::string>& alphabet) {
  switch (e->kind) {
    case ExprKind::Empty: return "%";
    case ExprKind::Letter: return alphabet[e->letter];
    case ExprKind::Not: return "~" + print_expr(e->left, alphabet);
    case ExprKind::Union:
      return "(" + print_expr(e->left, alphabet) + " + " +
             print_expr(e->right, alphabet) + ")";
    case ExprKind::Pre: return "Pre(" + print_expr(e->left, alphabet) + ")";
    case ExprKind::Inf: return "Inf(" + print_expr(e->left, alphabet) + ")";
  }
  return "?";
}

class ExprParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(const std::string& text, const RestrictedExpr& ctx)
      : text_(text), ctx_(ctx) {}

  ExprPtr parse() {
    ExprPtr e = parse_union();
    skip_ws();
    if (pos_ < text_.size())
      throw ExprParseError("unexpected trailing input in expression");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_union() {
    ExprPtr e = parse_unary();
    while (consume('+')) e = expr_union(e, parse_unary());
    return e;
  }

  ExprPtr parse_unary() {
    skip_ws();
    if (consume('~')) return expr_not(parse_unary());
    if (consume('%')) return expr_empty();
    if (consume('(')) {
      ExprPtr e = parse_union();
      if (!consume(')')) throw ExprParseError("expected ')'");
      return e;
    }
    // identifier: Pre(...), Inf(...), or an alphabet letter
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string id = text_.substr(start, pos_ - start);
    if (id.empty()) throw ExprParseError("expected an expression");
    if (id == "Pre" || id == "Inf") {
      if (!consume('(')) throw ExprParseError("expected '(' after " + id);
      ExprPtr e = parse_union();
      if (!consume(')')) throw ExprParseError("expected ')'");
      return id == "Pre" ? expr_pre(e) : expr_inf(e);
    }
    int a = ctx_.letter_index(id);
    if (a < 0) throw ExprParseError("letter '" + id + "' is not in the alphabet");
    return expr_letter(a);
  }

  const std::string& text_;
  const RestrictedExpr& ctx_;
  size_t pos_ = 0;
};

}  // namespace detail

// File format: first line `alphabet: a b ...`, rest the expression.
inline RestrictedExpr parse_expr_file(const std::string& text) {
  size_t nl = text.find('\n');
  if (nl == std::string::npos)
    throw ExprParseError("expected an alphabet line and an expression line");
  std::string header = text.substr(0, nl);
  const std::string prefix = "alphabet:";
  size_t at = header.find(prefix);
  if (at == std::string::npos)
    throw ExprParseError("first line must start with 'alphabet:'");
  RestrictedExpr out;
  std::string names = header.substr(at + prefix.size());
  std::string cur;
  for (char c : names + " ") {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.alphabet.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (out.alphabet.empty()) throw ExprParseError("empty alphabet");
  std::string body = text.substr(nl + 1);
  out.root = detail::ExprParser(body, out).parse();
  return out;
}

// -- language membership -------------------------------------------------------

using Word = std::vector<int>;  // letter indices, length >= 1

inline Word word_from_string(const RestrictedExpr& e, const std::string& s) {
  Word w;
  for (char c : s) {
    int a = e.letter_index(std::string(1, c));
    if (a < 0) throw ExprParseError("letter not in alphabet");
    w.push_back(a);
  }
  return w;
}

inline std::string word_to_string(const RestrictedExpr& e, const Word& w) {
  std::string s;
  for (int a : w) s += e.alphabet[a];
  return s;
}

namespace detail {

// Membership by recursion over the expression, quantifying over splits.
struct MemberOracle {
  const Word& w;
  // memo[(node, i, j)]
  std::map<std::tuple<const ExprNode*, int, int>, bool> memo;

  bool on(const ExprPtr& e, int i, int j) {
    auto key = std::make_tuple(e.get(), i, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool v = false;
    switch (e->kind) {
      case ExprKind::Empty:
        v = false;
        break;
      case ExprKind::Letter:
        v = i == j && w[i] == e->letter;
        break;
      case ExprKind::Not:
        v = !on(e->left, i, j);
        break;
      case ExprKind::Union:
        v = on(e->left, i, j) || on(e->right, i, j);
        break;
      case ExprKind::Pre:  // w[i..j] = u v with u in Lang(e), v nonempty
        for (int k = i; k < j && !v; ++k) v = on(e->left, i, k);
        break;
      case ExprKind::Inf:  // w[i..j] = u m v with u, v nonempty
        for (int k1 = i + 1; k1 <= j - 1 && !v; ++k1)
          for (int k2 = k1; k2 <= j - 1 && !v; ++k2) v = on(e->left, k1, k2);
        break;
    }
    memo.emplace(key, v);
    return v;
  }
};

}  // namespace detail

inline bool member(const RestrictedExpr& e, const Word& w) {
  if (w.empty()) throw std::invalid_argument("the empty word is excluded");
  detail::MemberOracle oracle{w};
  return oracle.on(e.root, 0, static_cast<int>(w.size()) - 1);
}

inline bool member(const RestrictedExpr& e, const std::string& w) {
  return member(e, word_from_string(e, w));
}

// -- translation to BD ----------------------------------------------------------

namespace detail {

inline Formula expr_formula(const RestrictedExpr& e, const ExprPtr& node) {
  switch (node->kind) {
    case ExprKind::Empty:
      return bottom();
    case ExprKind::Letter:
      return and_(pi(), prop(e.alphabet[node->letter]));
    case ExprKind::Not:
      return not_(expr_formula(e, node->left));
    case ExprKind::Union:
      return or_(expr_formula(e, node->left), expr_formula(e, node->right));
    case ExprKind::Pre:
      return diamond_b(expr_formula(e, node->left));
    case ExprKind::Inf:
      return diamond_d(expr_formula(e, node->left));
  }
  return bottom();
}

}  // namespace detail

// Exactly one alphabet letter at a point.
inline Formula one_letter_here(const RestrictedExpr& e) {
  Formula any = bottom();
  bool first = true;
  for (size_t a = 0; a < e.alphabet.size(); ++a) {
    Formula just = prop(e.alphabet[a]);
    for (size_t b = 0; b < e.alphabet.size(); ++b)
      if (b != a) just = and_(just, not_(prop(e.alphabet[b])));
    any = first ? just : or_(any, just);
    first = false;
  }
  return any;
}

// The alphabet constraint: every point interval the modalities can reach
// (the root when it is a point, all prefix points, all internal points)
// carries exactly one letter.  The final point is not reachable in BD;
// restricted-expression membership never depends on the final letter of a
// word of length >= 2, so this is enough for the word correspondence.
inline Formula alphabet_constraint(const RestrictedExpr& e) {
  Formula onehot = one_letter_here(e);
  Formula at_point = implies(pi(), onehot);
  return and_(at_point, and_(box_b(at_point), box_d(at_point)));
}

// BD formula whose models (under the alphabet constraint) spell exactly the
// words of Lang(e).
inline Formula translate(const RestrictedExpr& e) {
  return and_(detail::expr_formula(e, e.root), alphabet_constraint(e));
}

// -- word/model correspondence ---------------------------------------------------

inline HomogeneousModel word_to_model(const RestrictedExpr& e, const Word& w) {
  if (w.empty()) throw std::invalid_argument("the empty word is excluded");
  HomogeneousModel m;
  m.N = static_cast<int>(w.size()) - 1;
  m.letters = e.alphabet;
  m.pointval.assign(w.size(), 0);
  for (size_t z = 0; z < w.size(); ++z)
    m.pointval[z] = uint32_t(1) << w[z];
  return m;
}

// Strict inverse: requires exactly one letter at every point.
inline Word model_to_word(const RestrictedExpr& e, const HomogeneousModel& m) {
  Word w;
  for (int z = 0; z <= m.N; ++z) {
    int letter = -1;
    for (size_t a = 0; a < e.alphabet.size(); ++a) {
      int idx = m.letter_index(e.alphabet[a]);
      if (idx >= 0 && m.letter_at(z, idx)) {
        if (letter >= 0)
          throw std::invalid_argument("two letters at point " +
                                      std::to_string(z));
        letter = static_cast<int>(a);
      }
    }
    if (letter < 0)
      throw std::invalid_argument("no letter at point " + std::to_string(z));
    w.push_back(letter);
  }
  return w;
}

// -- emptiness -------------------------------------------------------------------

struct EmptinessResult {
  SolveResult solve;        // owns the certificate's universe
  std::optional<Word> witness;

  bool nonempty() const { return solve.verdict.sat(); }
  bool empty() const { return solve.verdict.unsat(); }
};

// Lang(e) is nonempty iff translate(e) is satisfiable; a Sat certificate
// converts to a witness word.  The final point of the certificate model may
// be unconstrained; any alphabet letter completes the word equivalently.
inline EmptinessResult emptiness(const RestrictedExpr& e,
                                 const SearchConfig& cfg = {}) {
  EmptinessResult out;
  out.solve = solve_formula(translate(e), Dialect::BD, cfg);
  if (out.solve.verdict.sat()) {
    const HomogeneousModel& m = out.solve.verdict.certificate->model;
    Word w;
    for (int z = 0; z <= m.N; ++z) {
      int letter = -1;
      bool multiple = false;
      for (size_t a = 0; a < e.alphabet.size(); ++a) {
        int idx = m.letter_index(e.alphabet[a]);
        if (idx >= 0 && m.letter_at(z, idx)) {
          multiple = letter >= 0;
          letter = static_cast<int>(a);
        }
      }
      if (z < m.N && (letter < 0 || multiple))
        throw std::logic_error("certificate violates the alphabet constraint");
      if (letter < 0 || multiple) letter = 0;  // free final point
      w.push_back(letter);
    }
    out.witness = std::move(w);
  }
  return out;
}

}  // namespace bdhom
