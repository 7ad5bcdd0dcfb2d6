#include <catch2/catch_amalgamated.hpp>

#include "bdhom/regex.hpp"

using namespace bdhom;

namespace {

RestrictedExpr parse2(const std::string& body) {
  return parse_expr_file("alphabet: a b\n" + body);
}

// All words over the expression's alphabet with 1 <= |w| <= max_len.
std::vector<Word> all_words(const RestrictedExpr& e, int max_len) {
  std::vector<Word> out;
  const int L = static_cast<int>(e.alphabet.size());
  for (int len = 1; len <= max_len; ++len) {
    Word w(len, 0);
    for (;;) {
      out.push_back(w);
      int i = len - 1;
      while (i >= 0 && w[i] == L - 1) w[i--] = 0;
      if (i < 0) break;
      ++w[i];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("expression parsing and printing") {
  RestrictedExpr e = parse2("~(Pre(a) + Inf(b)) + %");
  REQUIRE(e.alphabet == std::vector<std::string>{"a", "b"});
  REQUIRE(e.root->kind == ExprKind::Union);
  REQUIRE(print_expr(e.root, e.alphabet) == "(~(Pre(a) + Inf(b)) + %)");
  REQUIRE_THROWS_AS(parse2("Pre(c)"), ExprParseError);
  REQUIRE_THROWS_AS(parse2("a +"), ExprParseError);
  REQUIRE_THROWS_AS(parse_expr_file("a + b"), ExprParseError);
}

TEST_CASE("membership base cases") {
  RestrictedExpr any = parse2("~%");
  for (const Word& w : all_words(any, 3)) REQUIRE(member(any, w));

  RestrictedExpr pre_a = parse2("Pre(a)");
  REQUIRE(member(pre_a, "ab"));
  REQUIRE(member(pre_a, "aa"));
  REQUIRE_FALSE(member(pre_a, "a"));
  REQUIRE_FALSE(member(pre_a, "ba"));

  RestrictedExpr inf_a = parse2("Inf(a)");
  REQUIRE(member(inf_a, "bab"));
  REQUIRE_FALSE(member(inf_a, "ab"));
  REQUIRE_FALSE(member(inf_a, "ba"));
  REQUIRE(member(inf_a, "aaa"));

  REQUIRE_THROWS_AS(member(any, Word{}), std::invalid_argument);
}

TEST_CASE("negation involution and length laws") {
  const char* bodies[] = {"a", "Pre(b)", "Inf(a + b)", "~a + Inf(b)"};
  for (const char* body : bodies) {
    RestrictedExpr e = parse2(body);
    RestrictedExpr nn = parse2(std::string("~~(") + body + ")");
    for (const Word& w : all_words(e, 4))
      REQUIRE(member(e, w) == member(nn, w));
  }
  RestrictedExpr pre = parse2("Pre(~%)");
  RestrictedExpr inf = parse2("Inf(~%)");
  for (const Word& w : all_words(pre, 4)) {
    if (member(pre, w)) REQUIRE(w.size() >= 2);
    if (member(inf, w)) REQUIRE(w.size() >= 3);
  }
}

TEST_CASE("restricted languages never depend on the final letter") {
  const char* bodies[] = {"Pre(a)", "Inf(b)", "~Pre(a) + Inf(a)",
                          "Pre(Inf(a))", "~(a + b)"};
  for (const char* body : bodies) {
    RestrictedExpr e = parse2(body);
    for (const Word& w : all_words(e, 5)) {
      if (w.size() < 2) continue;
      Word w2 = w;
      w2.back() = 1 - w2.back();
      REQUIRE(member(e, w) == member(e, w2));
    }
  }
}

TEST_CASE("word/model bijection under the translation") {
  const char* bodies[] = {"a",          "b",
                          "Pre(a)",     "Inf(a)",
                          "~a",         "a + Pre(b)",
                          "~Pre(a)",    "Inf(a + b)",
                          "Pre(Pre(a))", "~Inf(~a)"};
  for (const char* body : bodies) {
    RestrictedExpr e = parse2(body);
    Formula f = translate(e);
    for (const Word& w : all_words(e, 4)) {
      HomogeneousModel m = word_to_model(e, w);
      REQUIRE(eval(m, 0, m.N, f) == member(e, w));
    }
  }
}

TEST_CASE("word/model round-trip and conformance errors") {
  RestrictedExpr e = parse2("a");
  for (const Word& w : all_words(e, 4)) {
    HomogeneousModel m = word_to_model(e, w);
    REQUIRE(model_to_word(e, m) == w);
  }
  HomogeneousModel two;
  two.N = 0;
  two.letters = {"a", "b"};
  two.pointval = {3};  // both letters at one point
  REQUIRE_THROWS_AS(model_to_word(e, two), std::invalid_argument);
  HomogeneousModel none;
  none.N = 0;
  none.letters = {"a", "b"};
  none.pointval = {0};
  REQUIRE_THROWS_AS(model_to_word(e, none), std::invalid_argument);
}

TEST_CASE("translate(%) is unsatisfiable with the alphabet constraint") {
  RestrictedExpr e = parse2("%");
  REQUIRE_FALSE(brute_force_sat(translate(e), 3).has_value());
  EmptinessResult r = emptiness(e);
  REQUIRE(r.empty());
}

TEST_CASE("emptiness with witnesses") {
  {
    EmptinessResult r = emptiness(parse2("~%"));
    REQUIRE(r.nonempty());
    REQUIRE(r.witness->size() == 1);
  }
  {
    // a word cannot start with both letters
    EmptinessResult r = emptiness(parse2("~(~Pre(a) + ~Pre(b))"));
    REQUIRE(r.empty());
  }
  {
    EmptinessResult r = emptiness(parse2("Inf(a)"));
    REQUIRE(r.nonempty());
    REQUIRE(r.witness->size() == 3);  // breadth-first: shortest witness
    RestrictedExpr e = parse2("Inf(a)");
    REQUIRE(member(e, *r.witness));
  }
}

TEST_CASE("emptiness agrees with word enumeration on a mixed corpus") {
  const char* bodies[] = {
      "%",
      "~%",
      "a",
      "Pre(a)",
      "Inf(b)",
      "Pre(a) + Pre(b)",
      "~(~Pre(a) + ~Pre(b))",
      "Inf(~(a + b))",
      "~Pre(~%)",
      "Pre(Inf(a))",
      "~(a + b + Pre(~%))",
  };
  for (const char* body : bodies) {
    RestrictedExpr e = parse2(body);
    EmptinessResult r = emptiness(e);
    bool enumerated = false;
    for (const Word& w : all_words(e, 6))
      enumerated = enumerated || member(e, w);
    INFO(body);
    if (r.nonempty()) {
      REQUIRE(member(e, *r.witness));
      REQUIRE(enumerated);  // witnesses here are short
    } else {
      REQUIRE(r.empty());
      REQUIRE_FALSE(enumerated);
    }
  }
}
