// Formula corpora and the solver-vs-oracle differential harness.
//
// The oracle is bounded (models up to maxN), so the comparison is
// cap-aware: a disagreement is either oracle-sat/solver-unsat, or
// oracle-unsat-up-to-cap with a solver certificate of height <= cap
// (breadth-first certificates are height-minimal, which makes this
// decidable).  A solver-sat whose minimal certificate exceeds the cap is
// agreement beyond the cap.

#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bdhom/solver.hpp"

namespace bdhom {

// Every BD/ABD formula with at most max_size AST nodes over the given
// letters (primitive kinds only; no T/F leaves).
inline std::vector<Formula> enumerate_formulas(
    int max_size, const std::vector<std::string>& letters, Dialect dialect) {
  std::vector<std::vector<Formula>> by_size(max_size + 1);
  for (const auto& l : letters) by_size[1].push_back(prop(l));
  for (int n = 2; n <= max_size; ++n) {
    for (const Formula& c : by_size[n - 1]) {
      by_size[n].push_back(not_(c));
      by_size[n].push_back(diamond_b(c));
      by_size[n].push_back(diamond_d(c));
      if (dialect == Dialect::ABD) by_size[n].push_back(diamond_a(c));
    }
    for (int a = 1; a + 1 < n; ++a)
      for (const Formula& l : by_size[a])
        for (const Formula& r : by_size[n - 1 - a])
          by_size[n].push_back(or_(l, r));
  }
  std::vector<Formula> out;
  for (auto& v : by_size)
    for (auto& f : v) out.push_back(f);
  // drop double negations introduced by not_ collapsing (duplicates of
  // smaller formulas)
  return out;
}

// Seeded random formula with at most `budget` AST nodes.
inline Formula random_formula(std::mt19937_64& rng, int budget,
                              const std::vector<std::string>& letters,
                              Dialect dialect) {
  const auto letter = [&] {
    return prop(letters[rng() % letters.size()]);
  };
  if (budget <= 1) return letter();
  switch (rng() % (dialect == Dialect::ABD ? 6 : 5)) {
    case 0: return letter();
    case 1: return not_(random_formula(rng, budget - 1, letters, dialect));
    case 2: {
      if (budget < 3) return letter();
      int lhs = 1 + static_cast<int>(rng() % static_cast<uint64_t>(budget - 2));
      return or_(random_formula(rng, lhs, letters, dialect),
                 random_formula(rng, budget - 1 - lhs, letters, dialect));
    }
    case 3: return diamond_b(random_formula(rng, budget - 1, letters, dialect));
    case 4: return diamond_d(random_formula(rng, budget - 1, letters, dialect));
    default: return diamond_a(random_formula(rng, budget - 1, letters, dialect));
  }
}

// All homogeneous models of f's letters with N <= maxN that satisfy f,
// up to `limit` models.
inline std::vector<HomogeneousModel> satisfying_models(const Formula& f,
                                                       int maxN,
                                                       size_t limit) {
  std::vector<HomogeneousModel> out;
  const std::vector<std::string> letters = letters_of(f);
  const int L = static_cast<int>(letters.size());
  Evaluator ev;
  int root = ev.index_of(f);
  for (int N = 0; N <= maxN && out.size() < limit; ++N) {
    if ((N + 1) * L >= 28) break;
    HomogeneousModel m;
    m.N = N;
    m.letters = letters;
    m.pointval.assign(N + 1, 0);
    for (uint64_t v = 0; v < (uint64_t(1) << ((N + 1) * L)); ++v) {
      for (int z = 0; z <= N; ++z)
        m.pointval[z] =
            static_cast<uint32_t>((v >> (z * L)) & ((uint64_t(1) << L) - 1));
      ev.bind(m);
      if (ev.eval(0, N, root)) {
        out.push_back(m);
        if (out.size() >= limit) break;
      }
    }
  }
  return out;
}

// -- differential crosscheck ---------------------------------------------------

struct CrosscheckItem {
  std::string formula;
  std::string outcome;  // agree-sat | agree-unsat | agree-beyond-cap |
                        // disagree | exhausted
  int oracle_n = -1;    // smallest satisfying N found by the oracle, else -1
  int solver_n = -1;    // certificate height, else -1
};

struct CrosscheckReport {
  uint64_t total = 0;
  uint64_t agree_sat = 0;
  uint64_t agree_unsat = 0;
  uint64_t agree_beyond_cap = 0;
  uint64_t disagreements = 0;
  uint64_t exhausted = 0;
  std::vector<CrosscheckItem> items;  // disagreements and exhaustions only
  bool record_all = false;

  bool clean() const { return disagreements == 0 && exhausted == 0; }
};

// Compares the solver with the bounded oracle on one formula.
inline CrosscheckItem crosscheck_one(const Formula& f, Dialect dialect,
                                     int oracle_maxN,
                                     const SearchConfig& cfg = {}) {
  CrosscheckItem item;
  item.formula = print_formula(f);
  auto oracle = brute_force_sat(f, oracle_maxN);
  if (oracle) item.oracle_n = oracle->N;
  SolveResult r = solve_formula(f, dialect, cfg);
  switch (r.verdict.kind) {
    case Verdict::Kind::ResourceExhausted:
      item.outcome = "exhausted";
      return item;
    case Verdict::Kind::Sat:
      item.solver_n = r.verdict.stats.certificate_height;
      if (oracle)
        item.outcome = item.solver_n == oracle->N ? "agree-sat" : "disagree";
      else
        item.outcome = item.solver_n > oracle_maxN ? "agree-beyond-cap"
                                                   : "disagree";
      return item;
    case Verdict::Kind::Unsat:
      item.outcome = oracle ? "disagree" : "agree-unsat";
      return item;
  }
  item.outcome = "exhausted";
  return item;
}

inline void crosscheck_accumulate(CrosscheckReport& rep,
                                  const CrosscheckItem& item) {
  ++rep.total;
  if (item.outcome == "agree-sat") ++rep.agree_sat;
  else if (item.outcome == "agree-unsat") ++rep.agree_unsat;
  else if (item.outcome == "agree-beyond-cap") ++rep.agree_beyond_cap;
  else if (item.outcome == "disagree") ++rep.disagreements;
  else ++rep.exhausted;
  if (rep.record_all || item.outcome == "disagree" ||
      item.outcome == "exhausted")
    rep.items.push_back(item);
}

struct CrosscheckSpec {
  Dialect dialect = Dialect::BD;
  int exhaustive_size = 0;                  // 0 = skip the exhaustive part
  std::vector<std::string> exhaustive_letters = {"p"};
  uint64_t random_count = 0;
  int random_size = 0;
  std::vector<std::string> random_letters = {"p", "q"};
  uint64_t seed = 1;
  int oracle_maxN = 6;
};

inline CrosscheckReport run_crosscheck(const CrosscheckSpec& spec,
                                       const SearchConfig& cfg = {},
                                       const std::function<void(uint64_t)>&
                                           progress = nullptr) {
  CrosscheckReport rep;
  if (spec.exhaustive_size > 0) {
    for (const Formula& f : enumerate_formulas(
             spec.exhaustive_size, spec.exhaustive_letters, spec.dialect)) {
      crosscheck_accumulate(
          rep, crosscheck_one(f, spec.dialect, spec.oracle_maxN, cfg));
      if (progress) progress(rep.total);
    }
  }
  std::mt19937_64 rng(spec.seed);
  for (uint64_t i = 0; i < spec.random_count; ++i) {
    Formula f = random_formula(rng, spec.random_size, spec.random_letters,
                               spec.dialect);
    crosscheck_accumulate(rep,
                          crosscheck_one(f, spec.dialect, spec.oracle_maxN, cfg));
    if (progress) progress(rep.total);
  }
  return rep;
}

}  // namespace bdhom
