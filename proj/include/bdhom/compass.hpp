// Compass structures: the triangular grid G_N = {(x,y): 0<=x<=y<=N} labelled
// by atoms (marked atoms in ABD), conversions to and from homogeneous
// models, and the full validity check.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdhom/atoms.hpp"
#include "bdhom/model.hpp"

namespace bdhom {

enum class ViolationKind : uint8_t {
  InitialFormula,
  BConsistency,
  DiagonalBRequest,
  DConsistency,
  DFulfilment,
  Homogeneity,
  AConsistency,
  AFulfilment,
  MarkingTransition,
};

inline const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::InitialFormula: return "InitialFormula";
    case ViolationKind::BConsistency: return "BConsistency";
    case ViolationKind::DiagonalBRequest: return "DiagonalBRequest";
    case ViolationKind::DConsistency: return "DConsistency";
    case ViolationKind::DFulfilment: return "DFulfilment";
    case ViolationKind::Homogeneity: return "Homogeneity";
    case ViolationKind::AConsistency: return "AConsistency";
    case ViolationKind::AFulfilment: return "AFulfilment";
    case ViolationKind::MarkingTransition: return "MarkingTransition";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  int x = -1, y = -1;    // primary location
  int x2 = -1, y2 = -1;  // secondary location, when the check is binary
  int formula_slot = -1; // offending modality slot / letter slot, if any
};

class CompassStructure {
 public:
  CompassStructure(const Universe& u, int N)
      : u_(&u), N_(N), labels_(cell_count(N), -1) {}

  const Universe& universe() const { return *u_; }
  int N() const { return N_; }

  int label(int x, int y) const { return labels_[cell(x, y)]; }
  void set_label(int x, int y, int lbl) { labels_[cell(x, y)] = lbl; }

  static int cell_count(int N) { return (N + 1) * (N + 2) / 2; }
  static int cell(int x, int y) { return y * (y + 1) / 2 + x; }

  // P(x,y): letters true at every diagonal point of [x,y], as letter-slot bits.
  Bits diag_props(int x, int y) const {
    Bits p = u_->data(label(x, x)).props;
    for (int z = x + 1; z <= y; ++z) p &= u_->data(label(z, z)).props;
    return p;
  }

 private:
  const Universe* u_;
  int N_;
  std::vector<int> labels_;
};

// -- model -> compass ---------------------------------------------------------

inline CompassStructure model_to_compass(const Universe& u,
                                         const HomogeneousModel& m) {
  const ClosureTable& cl = u.closure();
  const AtomTable& at = u.atoms();
  Evaluator ev;
  std::vector<int> rep_sub(cl.pair_count());
  for (int p = 0; p < cl.pair_count(); ++p) rep_sub[p] = ev.index_of(cl.rep(p));
  std::vector<int> arg_sub(cl.a_slots().size(), -1);
  for (size_t s = 0; s < cl.a_slots().size(); ++s) {
    const ArgRef& a = cl.a_slots()[s].arg;
    Formula arg = a.tag == ArgRef::Tag::ConstTrue    ? top()
                  : a.tag == ArgRef::Tag::ConstFalse ? bottom()
                  : (a.negated ? not_(cl.rep(a.pair)) : cl.rep(a.pair));
    arg_sub[s] = ev.index_of(arg);
  }
  ev.bind(m);

  CompassStructure g(u, m.N);
  for (int x = 0; x <= m.N; ++x) {
    // Marking state per <A>-argument along column x.
    std::vector<bool> requested(cl.a_slots().size(), false);
    for (size_t s = 0; s < cl.a_slots().size(); ++s)
      for (int y2 = x; y2 <= m.N && !requested[s]; ++y2)
        requested[s] = ev.eval(x, y2, arg_sub[s]);
    std::vector<bool> satisfied(cl.a_slots().size(), false);
    for (int y = x; y <= m.N; ++y) {
      Bits mem(cl.pair_count());
      for (int p = 0; p < cl.pair_count(); ++p)
        mem.assign(p, ev.eval(x, y, rep_sub[p]));
      int base = at.find(mem);
      if (base < 0)
        throw std::logic_error("model labelling is not an atom (oracle bug)");
      if (!u.abd()) {
        g.set_label(x, y, base);
        continue;
      }
      AlphaKey alpha = 0;
      for (size_t s = 0; s < cl.a_slots().size(); ++s) {
        if (!satisfied[s] && ev.eval(x, y, arg_sub[s])) satisfied[s] = true;
        Mark mk = satisfied[s]    ? Mark::Satisfied
                  : requested[s] ? Mark::Pending
                                 : Mark::Forbidden;
        alpha = alpha_set(alpha, static_cast<int>(s), mk);
      }
      int lbl = u.marked().find(base, alpha);
      if (lbl < 0)
        throw std::logic_error("model marking is not a marked atom");
      g.set_label(x, y, lbl);
    }
  }
  return g;
}

// -- validation ---------------------------------------------------------------

inline std::vector<Violation> validate_compass(const CompassStructure& g,
                                               size_t max_violations = 1000) {
  const Universe& u = g.universe();
  const ClosureTable& cl = u.closure();
  const int N = g.N();
  std::vector<Violation> out;
  const auto add = [&](Violation v) {
    if (out.size() < max_violations) out.push_back(v);
  };

  // initial formula
  if (!u.contains(g.label(0, N), cl.phi_ref()))
    add({ViolationKind::InitialFormula, 0, N});

  // row-major scan for the per-cell checks
  for (int y = 0; y <= N; ++y) {
    for (int x = 0; x <= y; ++x) {
      const int lbl = g.label(x, y);
      const AtomData& a = u.data(lbl);
      // diagonal B-requests empty
      if (x == y && a.req_b.any()) add({ViolationKind::DiagonalBRequest, x, y});
      // B-consistency towards the cell below
      if (x < y) {
        const int below = g.label(x, y - 1);
        if (!u.atoms().b_succ(u.base_of(lbl), u.base_of(below)))
          add({ViolationKind::BConsistency, x, y, x, y - 1});
        else if (u.abd() && !u.marked().b_succ(lbl, below))
          add({ViolationKind::MarkingTransition, x, y, x, y - 1});
      }
      // homogeneity
      if (a.props != g.diag_props(x, y)) add({ViolationKind::Homogeneity, x, y});
      // D-fulfilment: every request is observed strictly inside
      if (a.req_d.any()) {
        Bits seen(static_cast<int>(cl.d_slots().size()));
        for (int x2 = x + 1; x2 <= y - 1; ++x2)
          for (int y2 = x2; y2 <= y - 1; ++y2)
            seen |= u.data(g.label(x2, y2)).obs_d;
        if (!a.req_d.subset_of(seen)) {
          Bits missing = a.req_d.minus(seen);
          for (int s = 0; s < missing.size(); ++s)
            if (missing.test(s)) {
              add({ViolationKind::DFulfilment, x, y, -1, -1, s});
              break;
            }
        }
      }
      // A-consistency: Req_A equals the row diagonal's
      if (u.abd() && a.req_a != u.data(g.label(y, y)).req_a)
        add({ViolationKind::AConsistency, x, y, y, y});
      // A-fulfilment: the top row is final
      if (u.abd() && y == N && !u.is_final(lbl))
        add({ViolationKind::AFulfilment, x, y});
    }
  }

  // D-consistency over all nested interval pairs
  for (int y = 0; y <= N && out.size() < max_violations; ++y)
    for (int x = 0; x <= y; ++x)
      for (int y2 = y - 1; y2 >= 0; --y2)
        for (int x2 = x + 1; x2 <= y2; ++x2)
          if (!u.d_succ(g.label(x, y), g.label(x2, y2))) {
            add({ViolationKind::DConsistency, x, y, x2, y2});
            if (out.size() >= max_violations) break;
          }

  // deterministic order: primary location row-major, then kind
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return out;
}

// -- compass -> model ---------------------------------------------------------

inline HomogeneousModel compass_to_model(const CompassStructure& g) {
  if (!validate_compass(g, 1).empty())
    throw std::invalid_argument("compass structure is not valid");
  const Universe& u = g.universe();
  const ClosureTable& cl = u.closure();
  HomogeneousModel m;
  m.N = g.N();
  for (int lp : cl.letter_pairs()) m.letters.push_back(cl.rep(lp).letter());
  m.pointval.assign(m.N + 1, 0);
  for (int x = 0; x <= m.N; ++x) {
    const Bits& props = u.data(g.label(x, x)).props;
    for (int i = 0; i < props.size(); ++i)
      if (props.test(i)) m.pointval[x] |= uint32_t(1) << i;
  }
  return m;
}

// -- serialization ------------------------------------------------------------

inline nlohmann::json model_to_json(const HomogeneousModel& m) {
  nlohmann::json pts = nlohmann::json::array();
  for (int z = 0; z <= m.N; ++z) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& l : m.letters_at(z)) row.push_back(l);
    pts.push_back(row);
  }
  return {{"N", m.N}, {"points", pts}};
}

inline HomogeneousModel model_from_json(const nlohmann::json& j) {
  HomogeneousModel m;
  m.N = j.at("N").get<int>();
  std::set<std::string> letters;
  for (const auto& row : j.at("points"))
    for (const auto& l : row) letters.insert(l.get<std::string>());
  m.letters.assign(letters.begin(), letters.end());
  m.pointval.assign(m.N + 1, 0);
  int z = 0;
  for (const auto& row : j.at("points")) {
    for (const auto& l : row)
      m.pointval[z] |= uint32_t(1) << m.letter_index(l.get<std::string>());
    ++z;
  }
  return m;
}

// Compass dump: atoms in first-use order as sorted member lists, grid rows
// y = 0..N listing atom indices for x = 0..y.
inline nlohmann::json compass_to_json(const CompassStructure& g) {
  const Universe& u = g.universe();
  std::vector<int> atom_ids;           // label -> dump index
  std::vector<int> order;              // dump index -> label
  atom_ids.assign(u.label_count(), -1);
  nlohmann::json grid = nlohmann::json::array();
  for (int y = 0; y <= g.N(); ++y) {
    nlohmann::json row = nlohmann::json::array();
    for (int x = 0; x <= y; ++x) {
      int lbl = g.label(x, y);
      if (atom_ids[lbl] < 0) {
        atom_ids[lbl] = static_cast<int>(order.size());
        order.push_back(lbl);
      }
      row.push_back(atom_ids[lbl]);
    }
    grid.push_back(row);
  }
  nlohmann::json atoms = nlohmann::json::array();
  for (int lbl : order) atoms.push_back(u.dump_label(lbl));
  return {{"N", g.N()}, {"atoms", atoms}, {"grid", grid}};
}

// Text renderer: the triangular grid with an atom legend, highest row first.
inline std::string compass_to_text(const CompassStructure& g) {
  const Universe& u = g.universe();
  std::vector<int> atom_ids(u.label_count(), -1);
  std::vector<int> order;
  for (int y = 0; y <= g.N(); ++y)
    for (int x = 0; x <= y; ++x) {
      int lbl = g.label(x, y);
      if (atom_ids[lbl] < 0) {
        atom_ids[lbl] = static_cast<int>(order.size());
        order.push_back(lbl);
      }
    }
  std::string out;
  for (int y = g.N(); y >= 0; --y) {
    out += "y=" + std::to_string(y) + (y < 10 ? "  " : " ");
    for (int x = 0; x <= y; ++x) {
      std::string id = "A" + std::to_string(atom_ids[g.label(x, y)]);
      out += id;
      out.append(id.size() < 4 ? 4 - id.size() : 1, ' ');
    }
    out += "\n";
  }
  out += "legend:\n";
  for (size_t i = 0; i < order.size(); ++i)
    out += "  A" + std::to_string(i) + " = { " + u.dump_label(order[i]) + " }\n";
  return out;
}

}  // namespace bdhom
