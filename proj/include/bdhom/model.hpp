// Homogeneous interval models and the ground-truth evaluation oracle.
//
// A model stores only the point valuation; the interval valuation is
// derived: a letter holds on [x,y] iff it holds at every point of [x,y].
// Evaluation is naive and memoized per (subformula, interval).

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bdhom/formula.hpp"

namespace bdhom {

struct HomogeneousModel {
  int N = 0;                           // points 0..N
  std::vector<std::string> letters;    // letter ids used by pointval bits
  std::vector<uint32_t> pointval;      // size N+1, bit i = letters[i] holds

  int letter_index(const std::string& name) const {
    for (size_t i = 0; i < letters.size(); ++i)
      if (letters[i] == name) return static_cast<int>(i);
    return -1;
  }
  bool letter_at(int point, int letter) const {
    return (pointval[point] >> letter) & 1u;
  }
  bool letter_on(int x, int y, int letter) const {
    if (letter < 0) return false;
    for (int z = x; z <= y; ++z)
      if (!letter_at(z, letter)) return false;
    return true;
  }
  std::set<std::string> letters_at(int point) const {
    std::set<std::string> out;
    for (size_t i = 0; i < letters.size(); ++i)
      if (letter_at(point, static_cast<int>(i))) out.insert(letters[i]);
    return out;
  }
};

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Post-order index of the distinct nodes of a formula tree (by identity).
struct SubformulaIndex {
  std::vector<const FormulaNode*> nodes;
  std::unordered_map<const FormulaNode*, int> idx;

  int add(const Formula& f) {
    auto it = idx.find(f.raw());
    if (it != idx.end()) return it->second;
    switch (f.kind()) {
      case Kind::Not:
      case Kind::DiamondB:
      case Kind::DiamondD:
      case Kind::DiamondA:
        add(f.left());
        break;
      case Kind::Or:
        add(f.left());
        add(f.right());
        break;
      default:
        break;
    }
    int id = static_cast<int>(nodes.size());
    nodes.push_back(f.raw());
    idx.emplace(f.raw(), id);
    return id;
  }
};

}  // namespace detail

// Reusable evaluator: one instance per formula set, re-bindable to models.
// Letters are resolved against the bound model by name.
class Evaluator {
 public:
  Evaluator() = default;

  int index_of(const Formula& f) { return subs_.add(f); }

  void bind(const HomogeneousModel& m) {
    model_ = &m;
    const int cells = (m.N + 1) * (m.N + 2) / 2;
    const int total = cells * static_cast<int>(subs_.nodes.size());
    if (static_cast<int>(state_.size()) < total) state_.resize(total);
    ++epoch_;
    if (epoch_ == 0) {  // wrapped; reset
      std::fill(state_.begin(), state_.end(), Entry{});
      epoch_ = 1;
    }
    letter_of_.assign(subs_.nodes.size(), -1);
    for (size_t i = 0; i < subs_.nodes.size(); ++i)
      if (subs_.nodes[i]->kind == Kind::Prop)
        letter_of_[i] = m.letter_index(subs_.nodes[i]->letter);
  }

  bool eval(int x, int y, const Formula& f) { return eval(x, y, subs_.add(f)); }

  bool eval(int x, int y, int sub) {
    Entry& e = state_[cell(x, y) * subs_.nodes.size() + sub];
    if (e.epoch == epoch_) return e.value;
    const FormulaNode* n = subs_.nodes[sub];
    bool v = false;
    switch (n->kind) {
      case Kind::Top:
        v = true;
        break;
      case Kind::Prop:
        v = model_->letter_on(x, y, letter_of_[sub]);
        break;
      case Kind::Not:
        v = !eval(x, y, subs_.idx.at(n->left.get()));
        break;
      case Kind::Or:
        v = eval(x, y, subs_.idx.at(n->left.get())) ||
            eval(x, y, subs_.idx.at(n->right.get()));
        break;
      case Kind::DiamondB: {
        int c = subs_.idx.at(n->left.get());
        for (int y2 = x; y2 < y && !v; ++y2) v = eval(x, y2, c);
        break;
      }
      case Kind::DiamondD: {
        int c = subs_.idx.at(n->left.get());
        for (int x2 = x + 1; x2 <= y - 1 && !v; ++x2)
          for (int y2 = x2; y2 <= y - 1 && !v; ++y2) v = eval(x2, y2, c);
        break;
      }
      case Kind::DiamondA: {
        int c = subs_.idx.at(n->left.get());
        for (int y2 = y; y2 <= model_->N && !v; ++y2) v = eval(y, y2, c);
        break;
      }
    }
    e.epoch = epoch_;
    e.value = v;
    return v;
  }

 private:
  static int cell(int x, int y) { return y * (y + 1) / 2 + x; }

  struct Entry {
    uint32_t epoch = 0;
    bool value = false;
  };

  detail::SubformulaIndex subs_;
  const HomogeneousModel* model_ = nullptr;
  std::vector<Entry> state_;
  std::vector<int> letter_of_;
  uint32_t epoch_ = 0;
};

// One-shot evaluation (the spec's eval operation).
inline bool eval(const HomogeneousModel& m, int x, int y, const Formula& f) {
  Evaluator ev;
  ev.index_of(f);
  ev.bind(m);
  return ev.eval(x, y, f);
}

inline std::vector<std::string> letters_of(const Formula& f) {
  std::set<std::string> s;
  const auto walk = [&s](const Formula& g, const auto& self) -> void {
    switch (g.kind()) {
      case Kind::Prop:
        s.insert(g.letter());
        return;
      case Kind::Not:
      case Kind::DiamondB:
      case Kind::DiamondD:
      case Kind::DiamondA:
        self(g.left(), self);
        return;
      case Kind::Or:
        self(g.left(), self);
        self(g.right(), self);
        return;
      default:
        return;
    }
  };
  walk(f, walk);
  return {s.begin(), s.end()};
}

// Exhaustive satisfiability up to maxN.  Models are enumerated N ascending;
// for each N, valuations are the integers 0..2^{(N+1)L}-1 with point z's
// letter bits at positions [zL, zL+L).  Only letters occurring in f are
// enumerated: letters outside the closure cannot affect truth.
inline std::optional<HomogeneousModel> brute_force_sat(
    const Formula& f, int maxN, uint64_t max_models = uint64_t(1) << 26) {
  const std::vector<std::string> letters = letters_of(f);
  const int L = static_cast<int>(letters.size());
  Evaluator ev;
  const int root = ev.index_of(f);
  uint64_t spent = 0;
  for (int N = 0; N <= maxN; ++N) {
    const int bits = (N + 1) * L;
    if (bits >= 63 || (spent + (uint64_t(1) << bits)) > max_models)
      throw BudgetExceededError("model enumeration budget exceeded at N=" +
                                std::to_string(N));
    HomogeneousModel m;
    m.N = N;
    m.letters = letters;
    m.pointval.assign(N + 1, 0);
    const uint64_t total = uint64_t(1) << bits;
    for (uint64_t v = 0; v < total; ++v) {
      for (int z = 0; z <= N; ++z)
        m.pointval[z] = static_cast<uint32_t>((v >> (z * L)) &
                                              ((uint64_t(1) << L) - 1));
      ev.bind(m);
      if (ev.eval(0, N, root)) return m;
    }
    spent += total;
  }
  return std::nullopt;
}

}  // namespace bdhom
