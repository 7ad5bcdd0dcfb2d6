// Row-based satisfiability decision procedure.
//
// A search state is a row blueprint: the ordered (shading class, current
// atom) pairs of the row's witnesses, where a pair's class stands for the
// column's current block.  A transition guesses the next diagonal atom;
// every existing pair then updates deterministically -- the successor atom
// is forced by atom determinacy, so no future class commitment is ever
// needed -- and pairs that become covered within the row are removed.
// Breadth-first exploration with a visited set yields Sat with a
// minimal-height certificate, or Unsat when the reachable state space is
// exhausted.  Certificates are rebuilt by replay and hard-validated before
// the Sat verdict is returned.

#pragma once

#include <cmath>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bdhom/analysis.hpp"

namespace bdhom {

struct SearchConfig {
  uint64_t max_states = 2'000'000;   // visited-set size cap
  uint64_t max_queue = 2'000'000;    // frontier size cap
  enum class Order { BreadthFirst, DepthFirst };
  Order order = Order::BreadthFirst;
  bool report_theoretical_bound = false;
  size_t class_cap = 500'000;  // realized shading-class cap
  int free_bit_cap = 24;       // atom enumeration cap (free closure pairs)
};

struct SearchStats {
  uint64_t states_explored = 0;
  uint64_t frontier_peak = 0;
  uint64_t transitions = 0;
  int certificate_height = -1;
  int atom_count = 0;
  int class_count = 0;  // shading classes realized during the search
  std::string theoretical_bound;  // set when reporting is enabled
};

struct SolverRow {
  std::vector<ClassAtomPair> pairs;
  bool operator==(const SolverRow& o) const { return pairs == o.pairs; }
};

struct SatCertificate {
  CompassStructure compass;
  HomogeneousModel model;
  std::vector<SolverRow> trace;   // row states along the accepting path
  std::vector<int> guesses;       // guessed diagonal atom per transition
  int accept_pair = -1;           // index of the accepting pair in the last row
};

struct Verdict {
  enum class Kind { Sat, Unsat, ResourceExhausted };
  Kind kind;
  std::optional<SatCertificate> certificate;
  SearchStats stats;

  bool sat() const { return kind == Kind::Sat; }
  bool unsat() const { return kind == Kind::Unsat; }
};

inline const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Sat: return "sat";
    case Verdict::Kind::Unsat: return "unsat";
    default: return "resource-exhausted";
  }
}

// The bound on the number of distinct row blueprints, as the pair
// (factor, inner) of M = 2^(factor * 2^inner) + 1.
inline std::pair<long long, long long> theoretical_row_bound_exponents(
    int phi_size) {
  long long n = phi_size;
  long long factor = 2 * (n + 1) * (4 * n * n + 7 * n + 3);
  long long inner = 8 * n * n + 14 * n + 6;
  return {factor, inner};
}

inline std::string theoretical_row_bound_string(int phi_size) {
  auto [factor, inner] = theoretical_row_bound_exponents(phi_size);
  return "2^(" + std::to_string(factor) + "*2^" + std::to_string(inner) +
         ")+1";
}

// explored <= M; checked via logarithms, trivially true at desk scale.
inline bool within_theoretical_bound(uint64_t explored, int phi_size) {
  auto [factor, inner] = theoretical_row_bound_exponents(phi_size);
  if (inner >= 63) return true;
  long double log2m =
      static_cast<long double>(factor) * std::pow(2.0L, (long double)inner);
  return std::log2(static_cast<long double>(explored) + 1) <= log2m;
}

class Solver {
 public:
  Solver(const Universe& u, const SearchConfig& cfg = {})
      : u_(&u), cfg_(cfg), classes_(u) {
    for (int lbl = 0; lbl < u_->label_count(); ++lbl) {
      const AtomData& a = u_->data(lbl);
      if (a.req_b.none() && a.req_d.none()) diag_atoms_.push_back(lbl);
    }
    build_feasibility_masks();
  }

  const Universe& universe() const { return *u_; }
  ShadingClasses& classes() { return classes_; }
  const std::vector<int>& diagonal_atoms() const { return diag_atoms_; }

  // One row per guessable diagonal atom, holding the one-block class.
  std::vector<SolverRow> initial_rows() {
    std::vector<SolverRow> rows;
    for (int d : diag_atoms_) rows.push_back({{{block_class(d), d}}});
    return rows;
  }

  // The class standing for the block an atom heads.
  int block_class(int lbl) {
    if (static_cast<size_t>(lbl) >= block_class_.size())
      block_class_.resize(lbl + 1, -1);
    if (block_class_[lbl] < 0) block_class_[lbl] = classes_.intern({lbl});
    return block_class_[lbl];
  }

  // Index of an accepting pair, or -1.  BD: some pair's atom contains phi.
  // ABD: additionally every pair's marked atom is final.
  int accepting_pair(const SolverRow& row) const {
    if (u_->abd())
      for (const auto& p : row.pairs)
        if (!u_->is_final(p.second)) return -1;
    const ArgRef& phi = u_->closure().phi_ref();
    for (size_t i = 0; i < row.pairs.size(); ++i)
      if (u_->contains(row.pairs[i].second, phi)) return static_cast<int>(i);
    return -1;
  }
  bool is_accepting(const SolverRow& row) const {
    return accepting_pair(row) >= 0;
  }

  struct Step {
    std::vector<ClassAtomPair> updated;  // all pairs before covered-removal
    std::vector<int> kept;               // surviving positions, ascending
    std::vector<int> cover_target;       // removed position -> covering
                                         // position (pre-removal index), -1 if kept
    SolverRow next;
  };

  // The forced successor atom of a pair atom under (new diagonal, gained
  // D-requests), or -1.  Memoized: rows share tails, so (atom, diagonal,
  // gained-requests) triples repeat heavily across states.
  int pair_update(int lbl, int diag_lbl, const Bits& gained_req_d) {
    const uint64_t slot = (static_cast<uint64_t>(lbl) << 20) ^
                          static_cast<uint64_t>(diag_lbl);
    auto& per_gain = update_memo_[slot];
    auto it = per_gain.find(gained_req_d);
    if (it != per_gain.end()) return it->second;

    int result = -1;
    const AtomData& f = u_->data(lbl);
    const AtomData& diag = u_->data(diag_lbl);
    const Bits req_b = f.req_b | f.obs_b;
    const Bits req_d = f.req_d | gained_req_d;
    const Bits props = f.props & diag.props;
    const int base = u_->atoms().derive(req_b, req_d, diag.req_a, props);
    if (base >= 0) {
      int lbl2;
      if (u_->abd()) {
        AlphaKey alpha = u_->marked().step_alpha(u_->alpha_of(lbl), base);
        lbl2 = u_->marked().find(base, alpha);  // -1: marking rules violated
      } else {
        lbl2 = base;
      }
      if (lbl2 >= 0) {
        const int d_new = u_->delta_up(lbl2);
        const int d_old = u_->delta_up(lbl);
        // delta-up cannot rise along a column, and a plateau step keeps the
        // BD atom (by determinacy)
        if (d_new < d_old || (d_new == d_old && (u_->abd() || lbl2 == lbl)))
          result = lbl2;
      }
    }
    per_gain.emplace(gained_req_d, result);
    return result;
  }

  // Deterministic row update for one guessed diagonal atom; nullopt when a
  // position fails.
  std::optional<Step> apply_guess(const SolverRow& row, int diag_lbl) {
    const int k = static_cast<int>(row.pairs.size());

    // Suffix unions of Req_D u Obs_D over the current row, excluding the
    // new diagonal: the D-requests a cell can gain when the row rises.
    std::vector<Bits> suffix(
        k + 1, Bits(static_cast<int>(u_->closure().d_slots().size())));
    for (int j = k - 1; j >= 0; --j) {
      const AtomData& a = u_->data(row.pairs[j].second);
      suffix[j] = suffix[j + 1] | a.req_d | a.obs_d;
    }

    Step st;
    st.updated.reserve(k + 1);
    for (int i = 0; i < k; ++i) {
      const int lbl2 = pair_update(row.pairs[i].second, diag_lbl, suffix[i + 1]);
      if (lbl2 < 0) return std::nullopt;
      st.updated.push_back({block_class(lbl2), lbl2});
    }
    st.updated.push_back({block_class(diag_lbl), diag_lbl});

    // Covered-pair removal (one right-context pass for the whole sequence).
    const int n = static_cast<int>(st.updated.size());
    std::vector<std::vector<ClassAtomPair>> right(n + 1);
    for (int j = n - 1; j >= 0; --j) {
      right[j] = right[j + 1];
      if (std::find(right[j].begin(), right[j].end(), st.updated[j]) ==
          right[j].end()) {
        right[j].push_back(st.updated[j]);
        std::sort(right[j].begin(), right[j].end());
      }
    }
    st.cover_target.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      const int needed = u_->delta_up(st.updated[i].second) + 1;
      int found = 0, target = -1;
      for (int j = i + 1; j < n && found < needed; ++j)
        if (st.updated[j] == st.updated[i] && right[j + 1] == right[i + 1]) {
          if (target < 0) target = j;
          ++found;
        }
      if (found >= needed) {
        st.cover_target[i] = target;
      } else {
        st.kept.push_back(i);
        st.next.pairs.push_back(st.updated[i]);
      }
    }
    return st;
  }

  std::vector<SolverRow> successors(const SolverRow& row) {
    std::vector<SolverRow> out;
    for (int d : diag_atoms_)
      if (auto st = apply_guess(row, d))
        if (std::find(out.begin(), out.end(), st->next) == out.end())
          out.push_back(std::move(st->next));
    return out;
  }

  // A necessary condition for any accepting row to exist: some atom holds
  // phi (and in ABD it is final, and some final diagonal atom shares its
  // A-requests, since every row ends at its diagonal and rows are
  // A-consistent).  When it fails, the formula is unsatisfiable outright.
  bool acceptance_possible() const {
    const ArgRef& phi = u_->closure().phi_ref();
    for (int f = 0; f < u_->label_count(); ++f) {
      if (!u_->contains(f, phi)) continue;
      if (!u_->abd()) return true;
      if (!u_->is_final(f)) continue;
      for (int d : diag_atoms_)
        if (u_->is_final(d) && u_->data(d).req_a == u_->data(f).req_a)
          return true;
    }
    return false;
  }

  Verdict solve() {
    SearchStats stats;
    stats.atom_count = u_->label_count();
    if (cfg_.report_theoretical_bound)
      stats.theoretical_bound =
          theoretical_row_bound_string(u_->closure().phi_size());

    if (!acceptance_possible())
      return Verdict{Verdict::Kind::Unsat, std::nullopt, stats};

    nodes_.clear();
    seen_.clear();
    std::deque<int> frontier;

    const auto enqueue = [&](SolverRow r, int parent, int guess) -> int {
      if (!row_feasible(r)) return -1;  // no accepting row is reachable
      size_t h = row_hash(r);
      auto& bucket = seen_[h];
      for (int idx : bucket)
        if (nodes_[idx].row == r) return -1;
      nodes_.push_back({std::move(r), parent, guess});
      int idx = static_cast<int>(nodes_.size()) - 1;
      bucket.push_back(idx);
      frontier.push_back(idx);
      ++stats.states_explored;
      stats.frontier_peak =
          std::max<uint64_t>(stats.frontier_peak, frontier.size());
      return idx;
    };

    Verdict out{Verdict::Kind::Unsat, std::nullopt, {}};
    bool done = false;
    for (const SolverRow& r : initial_rows()) {
      int idx = enqueue(r, -1, -1);
      if (idx >= 0 && is_accepting(nodes_[idx].row)) {
        out = make_sat(idx, stats);
        done = true;
        break;
      }
    }

    while (!done && !frontier.empty()) {
      if (stats.states_explored > cfg_.max_states ||
          frontier.size() > cfg_.max_queue ||
          classes_.size() > static_cast<int>(cfg_.class_cap)) {
        out = Verdict{Verdict::Kind::ResourceExhausted, std::nullopt, stats};
        done = true;
        break;
      }
      int cur;
      if (cfg_.order == SearchConfig::Order::BreadthFirst) {
        cur = frontier.front();
        frontier.pop_front();
      } else {
        cur = frontier.back();
        frontier.pop_back();
      }
      // nodes_ may reallocate inside the loop; take the row by value
      const SolverRow row = nodes_[cur].row;
      for (int d : diag_atoms_) {
        auto st = apply_guess(row, d);
        if (!st) continue;
        ++stats.transitions;
        int idx = enqueue(std::move(st->next), cur, d);
        if (idx >= 0 && is_accepting(nodes_[idx].row)) {
          out = make_sat(idx, stats);
          done = true;
          break;
        }
      }
    }
    if (!done) out = Verdict{Verdict::Kind::Unsat, std::nullopt, stats};
    out.stats.class_count = classes_.size();
    return out;
  }

  // Rebuilds a full compass from an accepting path by replaying the
  // deterministic transitions and re-expanding covered columns through
  // their covering witnesses.
  CompassStructure reconstruct_compass(const std::vector<SolverRow>& trace,
                                       const std::vector<int>& guesses,
                                       int accept_pair) {
    if (trace.empty() || trace.size() != guesses.size() + 1)
      throw std::logic_error("reconstruct: malformed trace");
    if (trace[0].pairs.size() != 1)
      throw std::logic_error("reconstruct: root row must have one pair");

    std::vector<int> redirect{-1};   // column -> covering column, -1 if live
    std::vector<int> col_of_pos{0};  // pair position -> column
    std::vector<std::vector<int>> grid;  // grid[y][x] = label
    grid.push_back({trace[0].pairs[0].second});

    SolverRow cur = trace[0];
    for (size_t step = 0; step < guesses.size(); ++step) {
      auto st = apply_guess(cur, guesses[step]);
      if (!st || !(st->next == trace[step + 1]))
        throw std::logic_error("reconstruct: trace replay mismatch");
      const int y = static_cast<int>(grid.size());
      std::vector<int> new_col_of_pos(st->updated.size());
      for (size_t i = 0; i + 1 < st->updated.size(); ++i)
        new_col_of_pos[i] = col_of_pos[i];
      new_col_of_pos.back() = y;
      redirect.push_back(-1);

      std::vector<int> row_labels(y + 1, -1);
      for (size_t i = 0; i < st->updated.size(); ++i)
        row_labels[new_col_of_pos[i]] = st->updated[i].second;
      for (int x = 0; x <= y; ++x) {
        if (row_labels[x] >= 0) continue;
        int t = redirect[x];
        while (t >= 0 && redirect[t] >= 0) t = redirect[t];
        if (t < 0 || row_labels[t] < 0)
          throw std::logic_error("reconstruct: dangling covered column");
        row_labels[x] = row_labels[t];
      }
      grid.push_back(row_labels);

      std::vector<int> kept_cols;
      for (size_t i = 0; i < st->updated.size(); ++i) {
        if (st->cover_target[i] >= 0)
          redirect[new_col_of_pos[i]] = new_col_of_pos[st->cover_target[i]];
        else
          kept_cols.push_back(new_col_of_pos[i]);
      }
      col_of_pos = std::move(kept_cols);
      cur = trace[step + 1];
    }

    const int y_acc = static_cast<int>(grid.size()) - 1;
    const int x_acc = col_of_pos.at(accept_pair);
    const int N = y_acc - x_acc;
    CompassStructure g(*u_, N);
    for (int y = 0; y <= N; ++y)
      for (int x = 0; x <= y; ++x)
        g.set_label(x, y, grid[y + x_acc][x + x_acc]);
    return g;
  }

 private:
  struct Node {
    SolverRow row;
    int parent;
    int guess;
  };

  // -- A-finality feasibility masks (ABD) -------------------------------------
  //
  // An accepting row is all-final under one shared Req_A value, taken from a
  // final diagonal atom, with phi in a final diagonal-reachable atom.  For
  // each atom we precompute (over the abstract column-step relation) the set
  // of Req_A values under which some final future of it exists.  The
  // intersection of these sets across a row's pairs, with the final-diagonal
  // and phi sets, can only shrink along transitions (covered pairs leave an
  // equal-valued survivor behind), so rows with an empty intersection can
  // never reach acceptance and are pruned.

  void build_finality_masks() {
    const int n = u_->label_count();
    // distinct Req_A values, as mask bit positions
    std::map<Bits, int> ra_index;
    std::vector<int> ra_of(n);
    for (int l = 0; l < n; ++l) {
      const Bits& ra = u_->data(l).req_a;
      auto it = ra_index.find(ra);
      if (it == ra_index.end())
        it = ra_index.emplace(ra, static_cast<int>(ra_index.size())).first;
      ra_of[l] = it->second;
    }
    if (ra_index.size() > 63) return;  // masks disabled, prune stays off

    // abstract column step F -> G: successors grouped by the forced Req_B
    std::map<Bits, std::vector<int>> by_req_b;
    for (int l = 0; l < n; ++l) by_req_b[u_->data(l).req_b].push_back(l);
    const auto edge = [&](int f, int g) {
      const AtomData& fa = u_->data(f);
      const AtomData& ga = u_->data(g);
      if (!fa.req_d.subset_of(ga.req_d)) return false;
      if (!ga.props.subset_of(fa.props)) return false;
      return u_->marked().alpha_matches_step(u_->alpha_of(g), u_->alpha_of(f),
                                             u_->base_of(g));
    };

    // final_mask_[l]: Req_A bits of final atoms in the forward closure of l
    final_mask_.assign(n, 0);
    for (int l = 0; l < n; ++l)
      if (u_->is_final(l)) final_mask_[l] = uint64_t(1) << ra_of[l];
    bool changed = true;
    while (changed) {
      changed = false;
      for (int f = 0; f < n; ++f) {
        const AtomData& fa = u_->data(f);
        auto it = by_req_b.find(fa.req_b | fa.obs_b);
        if (it == by_req_b.end()) continue;
        for (int g : it->second) {
          if (!edge(f, g)) continue;
          uint64_t add = final_mask_[g] & ~final_mask_[f];
          if (add) {
            final_mask_[f] |= add;
            changed = true;
          }
        }
      }
    }

    diag_final_mask_ = 0;
    for (int d : diag_atoms_)
      if (u_->is_final(d)) diag_final_mask_ |= uint64_t(1) << ra_of[d];

    // atoms reachable from some diagonal (every column starts there)
    std::vector<char> reach(n, 0);
    std::deque<int> work;
    for (int d : diag_atoms_) {
      reach[d] = 1;
      work.push_back(d);
    }
    while (!work.empty()) {
      int f = work.front();
      work.pop_front();
      const AtomData& fa = u_->data(f);
      auto it = by_req_b.find(fa.req_b | fa.obs_b);
      if (it == by_req_b.end()) continue;
      for (int g : it->second)
        if (!reach[g] && edge(f, g)) {
          reach[g] = 1;
          work.push_back(g);
        }
    }
    phi_mask_ = 0;
    const ArgRef& phi = u_->closure().phi_ref();
    for (int l = 0; l < n; ++l)
      if (reach[l] && u_->is_final(l) && u_->contains(l, phi))
        phi_mask_ |= uint64_t(1) << ra_of[l];
    masks_ready_ = true;
  }

  bool row_feasible(const SolverRow& row) const {
    if (!masks_ready_) return true;
    uint64_t mask = diag_final_mask_ & phi_mask_;
    for (const auto& p : row.pairs) {
      mask &= final_mask_[p.second];
      if (!mask) return false;
    }
    return true;
  }

  static size_t row_hash(const SolverRow& r) {
    size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto& p : r.pairs) {
      h = (h ^ static_cast<size_t>(p.first)) * 0x100000001b3ULL;
      h = (h ^ static_cast<size_t>(p.second)) * 0x100000001b3ULL;
    }
    return h;
  }

  Verdict make_sat(int idx, SearchStats& stats) {
    std::vector<SolverRow> trace;
    std::vector<int> guesses;
    for (int cur = idx; cur >= 0; cur = nodes_[cur].parent) {
      trace.push_back(nodes_[cur].row);
      if (nodes_[cur].guess >= 0) guesses.push_back(nodes_[cur].guess);
    }
    std::reverse(trace.begin(), trace.end());
    std::reverse(guesses.begin(), guesses.end());
    const int accept = accepting_pair(trace.back());
    CompassStructure g = reconstruct_compass(trace, guesses, accept);
    if (!validate_compass(g, 1).empty())
      throw std::logic_error("solver bug: certificate fails validation");
    HomogeneousModel m = compass_to_model(g);
    if (!eval(m, 0, g.N(), u_->closure().phi()))
      throw std::logic_error("solver bug: certificate model fails eval");
    stats.certificate_height = g.N();
    SatCertificate cert{std::move(g), std::move(m), std::move(trace),
                        std::move(guesses), accept};
    return Verdict{Verdict::Kind::Sat, std::move(cert), stats};
  }

  const Universe* u_;
  SearchConfig cfg_;
  ShadingClasses classes_;
  std::vector<int> diag_atoms_;
  std::vector<int> block_class_;
  std::vector<Node> nodes_;
  std::unordered_map<size_t, std::vector<int>> seen_;
  std::unordered_map<uint64_t, std::unordered_map<Bits, int, BitsHash>>
      update_memo_;
  bool masks_ready_ = false;
  std::vector<uint64_t> final_mask_;
  uint64_t diag_final_mask_ = 0;
  uint64_t phi_mask_ = 0;
};

// Convenience wrapper: builds and owns the universe the certificate refers
// to, mapping enumeration-cap overruns to a ResourceExhausted verdict.
struct SolveResult {
  std::unique_ptr<Universe> universe;
  std::unique_ptr<Solver> solver;
  Verdict verdict{Verdict::Kind::ResourceExhausted, std::nullopt, {}};
  std::string note;  // set when enumeration was refused
};

inline SolveResult solve_formula(const Formula& f, Dialect dialect,
                                 const SearchConfig& cfg = {}) {
  SolveResult r;
  try {
    r.universe = std::make_unique<Universe>(f, dialect, cfg.free_bit_cap);
    r.solver = std::make_unique<Solver>(*r.universe, cfg);
    r.verdict = r.solver->solve();
  } catch (const EnumerationCapError& e) {
    r.verdict = Verdict{Verdict::Kind::ResourceExhausted, std::nullopt, {}};
    r.note = e.what();
  }
  return r;
}

}  // namespace bdhom
