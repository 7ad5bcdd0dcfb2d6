#include <catch2/catch_amalgamated.hpp>

#include "bdhom/atoms.hpp"
#include "bdhom/parser.hpp"

using namespace bdhom;

namespace {

// Brute-force enumeration straight from the definition: every subset of the
// closure pairs that satisfies the atom conditions.  Used as the oracle for
// the free-bit enumeration.
std::vector<Bits> atoms_by_definition(const ClosureTable& cl) {
  std::vector<Bits> out;
  const int P = cl.pair_count();
  for (uint64_t mask = 0; mask < (uint64_t(1) << P); ++mask) {
    Bits m(P);
    for (int p = 0; p < P; ++p)
      if ((mask >> p) & 1u) m.set(p);
    bool ok = true;
    for (const auto& op : cl.or_pairs()) {
      bool v = AtomTable::eval_ref(m, op.left) || AtomTable::eval_ref(m, op.right);
      if (m.test(op.pair) != v) ok = false;
    }
    // point atoms: [A]psi in F forces psi in F
    if (ok && !m.test(cl.b_top_pair())) {
      for (const auto& s : cl.a_slots())
        if (!m.test(s.pair) && AtomTable::eval_ref(m, s.arg)) ok = false;
    }
    if (ok) out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("atoms of <B>p: three independent pairs give 8 atoms") {
  ClosureTable cl(parse_formula("<B>p"), Dialect::BD);
  REQUIRE(cl.pair_count() == 3);
  AtomTable at(cl);
  REQUIRE(at.size() == 8);
  auto brute = atoms_by_definition(cl);
  REQUIRE(brute.size() == 8);
  for (const Bits& b : brute) REQUIRE(at.find(b) >= 0);
}

TEST_CASE("disjunction rule on atoms of p|q") {
  Formula f = parse_formula("p | q");
  ClosureTable cl(f, Dialect::BD);
  AtomTable at(cl);
  ArgRef fr = cl.resolve(f);
  ArgRef pr = cl.resolve(prop("p"));
  ArgRef qr = cl.resolve(prop("q"));
  for (int a = 0; a < at.size(); ++a) {
    bool disj = at.contains(a, fr);
    REQUIRE(disj == (at.contains(a, pr) || at.contains(a, qr)));
  }
}

TEST_CASE("free-bit enumeration matches the definition on random closures") {
  const char* samples[] = {
      "p",
      "<B>(p | q) & <D>!p",
      "<D>(p & q) | !<B>!p",
      "<A>p | <D>(q | !p)",
      "pi & (p -> <B>q)",
  };
  for (const char* s : samples) {
    Formula f = parse_formula(s, Dialect::ABD);
    ClosureTable cl(f, Dialect::ABD);
    AtomTable at(cl);
    auto brute = atoms_by_definition(cl);
    REQUIRE(static_cast<size_t>(at.size()) == brute.size());
    for (const Bits& b : brute) REQUIRE(at.find(b) >= 0);
  }
}

TEST_CASE("ABD dialect with no <A> arguments degenerates to the BD atoms") {
  Universe u(parse_formula("p"), Dialect::ABD);
  REQUIRE(u.abd());
  REQUIRE(u.atoms().size() == 4);
  REQUIRE(u.marked().size() == 4);  // one empty marking per base atom
  for (int i = 0; i < u.marked().size(); ++i) {
    REQUIRE(u.marked()[i].alpha == 0);
    REQUIRE(u.is_final(i));
  }
}

TEST_CASE("req and obs projections") {
  ClosureTable cl(parse_formula("<B>p"), Dialect::BD);
  AtomTable at(cl);
  // F contains <B>p (and <B>T): req(F,B) = {p, T}
  for (int a = 0; a < at.size(); ++a) {
    const AtomData& d = at[a];
    bool has_bp = at.contains(a, parse_formula("<B>p"));
    bool has_bt = at.contains(a, diamond_b(top()));
    REQUIRE(d.req_b.count() == int(has_bp) + int(has_bt));
    // obs always contains the implicit T argument
    bool top_observed = false;
    for (size_t s = 0; s < cl.b_slots().size(); ++s)
      if (cl.b_slots()[s].arg.tag == ArgRef::Tag::ConstTrue)
        top_observed = d.obs_b.test(static_cast<int>(s));
    REQUIRE(top_observed);
    // per argument: either requested or its negation is boxed
    Bits boxed = at.box(a, Kind::DiamondB);
    for (int s = 0; s < d.req_b.size(); ++s)
      REQUIRE((d.req_b.test(s) || boxed.test(s)));
  }
}

TEST_CASE("b_succ definitional example") {
  // F >= {<B>p, <B>T, !p}, G >= {!<B>p, [B]F, p}:
  // Req_B(F) = {p,T} = Req_B(G) u Obs_B(G) -> F ->B G.
  ClosureTable cl(parse_formula("<B>p"), Dialect::BD);
  AtomTable at(cl);
  int f = -1, g = -1;
  for (int a = 0; a < at.size(); ++a) {
    bool bp = at.contains(a, parse_formula("<B>p"));
    bool bt = at.contains(a, diamond_b(top()));
    bool p = at.contains(a, prop("p"));
    if (bp && bt && !p) f = a;
    if (!bp && !bt && p) g = a;
  }
  REQUIRE(f >= 0);
  REQUIRE(g >= 0);
  REQUIRE(at.b_succ(f, g));
  REQUIRE_FALSE(at.b_succ(g, f));
}

TEST_CASE("initial atoms are never B-reflexive (the implicit T observable)") {
  ClosureTable cl(parse_formula("<B>p | <D>q"), Dialect::BD);
  AtomTable at(cl);
  for (int a = 0; a < at.size(); ++a) {
    REQUIRE(at.is_b_reflexive(a) == at.b_succ(a, a));
    if (at[a].initial) REQUIRE_FALSE(at.is_b_reflexive(a));
    if (at[a].is_point && at[a].obs_b.any()) REQUIRE_FALSE(at.is_b_reflexive(a));
  }
}

TEST_CASE("d_succ: empty right side accepts every atom, and transitivity") {
  ClosureTable cl(parse_formula("<D>!q"), Dialect::BD);
  AtomTable at(cl);
  for (int g = 0; g < at.size(); ++g) {
    if (at[g].req_d.none() && at[g].obs_d.none())
      for (int f = 0; f < at.size(); ++f) REQUIRE(at.d_succ(f, g));
  }
  // <D>!q example: Req_D(F)={!q}, Req_D(G)=empty, Obs_D(G)={!q} -> d_succ
  int f = -1, g = -1;
  for (int a = 0; a < at.size(); ++a) {
    bool dq = at.contains(a, parse_formula("<D>!q"));
    bool q = at.contains(a, prop("q"));
    if (dq && q) f = a;          // requests !q, does not observe it
    if (!dq && !q) g = a;        // observes !q, requests nothing
    if (f >= 0 && g >= 0) break;
  }
  REQUIRE(at.d_succ(f, g));
  // transitivity, exhaustively
  for (int a = 0; a < at.size(); ++a)
    for (int b = 0; b < at.size(); ++b) {
      if (!at.d_succ(a, b)) continue;
      for (int c = 0; c < at.size(); ++c)
        if (at.d_succ(b, c)) REQUIRE(at.d_succ(a, c));
    }
}

TEST_CASE("b_succ and d_succ imply box containment") {
  ClosureTable cl(parse_formula("<B>p & <D>(q | p)"), Dialect::BD);
  AtomTable at(cl);
  for (int f = 0; f < at.size(); ++f)
    for (int g = 0; g < at.size(); ++g) {
      if (at.b_succ(f, g)) {
        Bits boxed = at.box(f, Kind::DiamondB);
        for (size_t s = 0; s < cl.b_slots().size(); ++s)
          if (boxed.test(static_cast<int>(s)))
            REQUIRE_FALSE(AtomTable::eval_ref(at[g].membership,
                                              cl.b_slots()[s].arg));
      }
      if (at.d_succ(f, g)) {
        Bits boxed = at.box(f, Kind::DiamondD);
        for (size_t s = 0; s < cl.d_slots().size(); ++s)
          if (boxed.test(static_cast<int>(s)))
            REQUIRE_FALSE(AtomTable::eval_ref(at[g].membership,
                                              cl.d_slots()[s].arg));
      }
    }
}

TEST_CASE("atom determinacy: Req_B, Req_D and letters identify the atom") {
  const char* samples[] = {"<B>p", "<B>(p|q) & <D>!p", "p | <D>(q&p)"};
  for (const char* s : samples) {
    ClosureTable cl(parse_formula(s), Dialect::BD);
    AtomTable at(cl);
    for (int a = 0; a < at.size(); ++a)
      for (int b = a + 1; b < at.size(); ++b) {
        bool same = at[a].req_b == at[b].req_b && at[a].req_d == at[b].req_d &&
                    at[a].props == at[b].props;
        REQUIRE_FALSE(same);  // distinct atoms must differ in the triple
      }
  }
}

TEST_CASE("marked-atom determinacy adds Req_A and the marking") {
  Universe u(parse_formula("<A>p | <D>q", Dialect::ABD), Dialect::ABD);
  const MarkedAtomTable& mt = u.marked();
  for (int a = 0; a < mt.size(); ++a)
    for (int b = a + 1; b < mt.size(); ++b) {
      const AtomData& da = u.data(a);
      const AtomData& db = u.data(b);
      bool same = da.req_b == db.req_b && da.req_d == db.req_d &&
                  da.req_a == db.req_a && da.props == db.props &&
                  mt[a].alpha == mt[b].alpha;
      REQUIRE_FALSE(same);
    }
}

TEST_CASE("atom counts respect the exponential bounds") {
  const char* samples[] = {"p", "<B>p", "<B>(p|q) & <D>!p", "<A>p | <D>q",
                           "<A>(p & <B>q)"};
  for (const char* s : samples) {
    Formula f = parse_formula(s, Dialect::ABD);
    Universe u(f, Dialect::ABD);
    const int n = u.closure().phi_size();
    REQUIRE(u.atoms().size() <= (1 << (n + 1)));
    REQUIRE(u.marked().size() <= (n >= 16 ? INT32_MAX : (1 << (2 * n))));
  }
}

TEST_CASE("delta-up term arithmetic reproduces the worked values") {
  // one B-argument, no D-arguments, one letter held by every atom:
  REQUIRE(AtomTable::delta_up_value(1, 0, 0, 0, 0, 1, 0) == 3);
  REQUIRE(AtomTable::delta_up_value(1, 0, 1, 0, 0, 1, 0) == 2);
  REQUIRE(AtomTable::delta_up_value(1, 1, 0, 0, 0, 1, 0) == 1);
}

TEST_CASE("delta-up range and monotonicity along ->B") {
  const char* samples[] = {"<B>p", "<B>(p|q) & <D>!p", "p & <D>q"};
  for (const char* s : samples) {
    ClosureTable cl(parse_formula(s), Dialect::BD);
    AtomTable at(cl);
    const int n = cl.phi_size();
    for (int a = 0; a < at.size(); ++a) {
      REQUIRE(at[a].delta_up >= 0);
      REQUIRE(at[a].delta_up <= 4 * n + 1);
    }
    // F ->B G with the B-sequence side conditions is non-increasing upward
    for (int f = 0; f < at.size(); ++f)
      for (int g = 0; g < at.size(); ++g)
        if (at.b_succ(f, g) && at[g].req_d.subset_of(at[f].req_d) &&
            at[f].props.subset_of(at[g].props))
          REQUIRE(at[f].delta_up <= at[g].delta_up);
  }
}

TEST_CASE("marked atoms: point markings are forced, finality as defined") {
  Universe u(parse_formula("<A>p", Dialect::ABD), Dialect::ABD);
  const MarkedAtomTable& mt = u.marked();
  const ClosureTable& cl = u.closure();
  ArgRef p = cl.resolve(prop("p"));
  ArgRef ap = cl.resolve(parse_formula("<A>p", Dialect::ABD));
  int point_pending = 0;
  for (int i = 0; i < mt.size(); ++i) {
    const AtomData& base = u.data(i);
    Mark m = alpha_get(mt[i].alpha, 0);
    bool has_p = u.contains(i, p);
    bool has_ap = u.contains(i, ap);
    if (has_p) REQUIRE(m == Mark::Satisfied);
    if (m == Mark::Forbidden) REQUIRE_FALSE(has_p);
    if (base.is_point) {
      // point atoms: pending iff requested-but-unsatisfied
      if (m == Mark::Pending) {
        REQUIRE(has_ap);
        REQUIRE_FALSE(has_p);
        ++point_pending;
        REQUIRE_FALSE(mt.is_final(i));
      }
      if (m == Mark::Satisfied) REQUIRE(has_p);
      if (m == Mark::Forbidden) REQUIRE_FALSE(has_ap);
    }
    REQUIRE(mt.is_final(i) == (m != Mark::Pending));
  }
  REQUIRE(point_pending > 0);
}

TEST_CASE("ABD delta-up adds the pending count") {
  Universe u(parse_formula("<A>p | <D>q", Dialect::ABD), Dialect::ABD);
  for (int i = 0; i < u.marked().size(); ++i) {
    int pend = 0;
    for (int s = 0; s < (int)u.closure().a_slots().size(); ++s)
      if (alpha_get(u.marked()[i].alpha, s) == Mark::Pending) ++pend;
    REQUIRE(u.delta_up(i) == u.data(i).delta_up + pend);
  }
}

TEST_CASE("atom debug dump is sorted and stable") {
  ClosureTable cl(parse_formula("<B>p"), Dialect::BD);
  AtomTable at(cl);
  for (int a = 0; a < at.size(); ++a) {
    std::string d = at.dump_atom(a);
    // comma-separated member tokens, sorted
    std::vector<std::string> toks;
    size_t pos = 0;
    while (pos < d.size()) {
      size_t sp = d.find(", ", pos);
      if (sp == std::string::npos) sp = d.size();
      toks.push_back(d.substr(pos, sp - pos));
      pos = sp == d.size() ? sp : sp + 2;
    }
    REQUIRE(std::is_sorted(toks.begin(), toks.end()));
    REQUIRE(toks.size() == static_cast<size_t>(cl.pair_count()));
  }
}
