#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bdhom/closure.hpp"
#include "bdhom/parser.hpp"

using namespace bdhom;

TEST_CASE("parsing primitive cases") {
  Formula f = parse_formula("<B> p");
  REQUIRE(f.kind() == Kind::DiamondB);
  REQUIRE(f.left().kind() == Kind::Prop);
  REQUIRE(f.left().letter() == "p");
  REQUIRE(f == diamond_b(prop("p")));
}

TEST_CASE("pi is sugar for [B]F") {
  Formula f = parse_formula("pi");
  REQUIRE(f == not_(diamond_b(top())));
  REQUIRE(f == box_b(bottom()));
  REQUIRE(f == pi());
}

TEST_CASE("sugar expansion uses primitive kinds only") {
  Formula f = parse_formula("p & q -> [D] r <-> !p | F");
  const auto walk = [](const Formula& g, const auto& self) -> void {
    switch (g.kind()) {
      case Kind::Top:
      case Kind::Prop:
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
    }
  };
  walk(f, walk);  // exhaustive switch = every node is a primitive kind
  SUCCEED();
}

TEST_CASE("[G] in ABD mode expands to the four-conjunct closure form") {
  Formula f = parse_formula("[G] p", Dialect::ABD);
  Formula p = prop("p");
  REQUIRE(f == and_(p, and_(box_b(p), and_(box_a(p), box_b(box_a(p))))));
}

TEST_CASE("diamond A is rejected in BD mode") {
  REQUIRE_THROWS_AS(parse_formula("<A> p", Dialect::BD), ParseError);
  REQUIRE_THROWS_AS(parse_formula("[G] p", Dialect::BD), ParseError);
  REQUIRE_NOTHROW(parse_formula("<A> p", Dialect::ABD));
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_formula("p |\n  & q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 2);
    REQUIRE(e.col >= 3);
  }
}

TEST_CASE("precedence and associativity") {
  REQUIRE(parse_formula("p & q | r") == or_(and_(prop("p"), prop("q")), prop("r")));
  REQUIRE(parse_formula("p -> q -> r") ==
          implies(prop("p"), implies(prop("q"), prop("r"))));
  REQUIRE(parse_formula("!p | q") == or_(not_(prop("p")), prop("q")));
  REQUIRE(parse_formula("<B> p | q") == or_(diamond_b(prop("p")), prop("q")));
}

namespace {

Formula random_formula(std::mt19937& rng, int budget, bool abd) {
  std::uniform_int_distribution<int> pick(0, abd ? 6 : 5);
  std::uniform_int_distribution<int> letter(0, 1);
  if (budget <= 1) {
    return letter(rng) ? prop("p") : prop("q");
  }
  switch (pick(rng)) {
    case 0: return prop(letter(rng) ? "p" : "q");
    case 1: return not_(random_formula(rng, budget - 1, abd));
    case 2: {
      int lhs = 1 + static_cast<int>(rng() % static_cast<unsigned>(budget - 2 + 1));
      return or_(random_formula(rng, lhs, abd),
                 random_formula(rng, budget - 1 - lhs, abd));
    }
    case 3: return diamond_b(random_formula(rng, budget - 1, abd));
    case 4: return diamond_d(random_formula(rng, budget - 1, abd));
    case 5: return top();
    default: return diamond_a(random_formula(rng, budget - 1, abd));
  }
}

}  // namespace

TEST_CASE("print/parse round-trip on random formulas") {
  std::mt19937 rng(20240811);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 1 + static_cast<int>(rng() % 12), true);
    Formula g = parse_formula(print_formula(f), Dialect::ABD);
    REQUIRE(f == g);
  }
}

// -- closure ------------------------------------------------------------------

TEST_CASE("closure of a single letter") {
  ClosureTable cl(parse_formula("p"), Dialect::BD);
  // CL = {p, !p, <B>T, [B]F}
  REQUIRE(cl.member_count() == 4);
  REQUIRE(cl.phi_size() == 2);
  REQUIRE(cl.letter_pairs().size() == 1);
  REQUIRE(cl.b_slots().size() == 1);
  REQUIRE(cl.d_slots().empty());
}

TEST_CASE("closure of <D>!q lists six members") {
  ClosureTable cl(parse_formula("<D>!q"), Dialect::BD);
  // {<D>!q, !<D>!q, !q, q, <B>T, [B]F}
  REQUIRE(cl.member_count() == 6);
  REQUIRE(cl.phi_size() == 3);
  REQUIRE(cl.member_index(parse_formula("<D>!q")) >= 0);
  REQUIRE(cl.member_index(parse_formula("!q")) >= 0);
  REQUIRE(cl.member_index(parse_formula("q")) >= 0);
  REQUIRE(cl.member_index(diamond_b(top())) >= 0);
}

TEST_CASE("closure of <B>T is just the mandatory pair") {
  ClosureTable cl(parse_formula("<B>T"), Dialect::BD);
  REQUIRE(cl.member_count() == 2);
  REQUIRE(cl.phi_size() == 1);
}

TEST_CASE("negation pairing is a total involution") {
  ClosureTable cl(parse_formula("<B>(p | !q) & <D>q"), Dialect::BD);
  REQUIRE(cl.member_count() % 2 == 0);
  for (int m = 0; m < cl.member_count(); ++m) {
    int c = ClosureTable::complement(m);
    REQUIRE(c != m);
    REQUIRE(ClosureTable::complement(c) == m);
    REQUIRE(cl.member_index(not_(cl.member(m))) == c);
  }
}

namespace {

int count_distinct_subformulas(const Formula& f) {
  std::vector<Formula> seen;
  const auto walk = [&seen](const Formula& g, const auto& self) -> void {
    for (const auto& s : seen)
      if (s == g) return;
    seen.push_back(g);
    switch (g.kind()) {
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
  return static_cast<int>(seen.size());
}

}  // namespace

TEST_CASE("closure size bound |CL| <= 2|subformulas| + 2") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, 1 + static_cast<int>(rng() % 10), true);
    ClosureTable cl(f, Dialect::ABD);
    REQUIRE(cl.member_count() <= 2 * count_distinct_subformulas(f) + 2);
    // the two mandatory members pair with each other
    int bt = cl.member_index(diamond_b(top()));
    REQUIRE(cl.member_index(not_(diamond_b(top()))) ==
            ClosureTable::complement(bt));
  }
}

TEST_CASE("closure partitions are disjoint and index-consistent") {
  ClosureTable cl(parse_formula("<A>(p | q) & <B>p & <D>!p & q", Dialect::ABD),
                  Dialect::ABD);
  std::vector<int> pairs;
  for (int p : cl.letter_pairs()) pairs.push_back(p);
  for (auto& s : cl.b_slots()) pairs.push_back(s.pair);
  for (auto& s : cl.d_slots()) pairs.push_back(s.pair);
  for (auto& s : cl.a_slots()) pairs.push_back(s.pair);
  std::sort(pairs.begin(), pairs.end());
  REQUIRE(std::adjacent_find(pairs.begin(), pairs.end()) == pairs.end());
  for (int p : pairs) REQUIRE(p < cl.pair_count());
}
