#include "causalnet/corpus.hpp"
#include "causalnet/errors.hpp"
#include "causalnet/formula.hpp"
#include "doctest.h"

using namespace causalnet;

TEST_CASE("parse atoms and markers") {
  Formula a = parse_formula("A");
  CHECK(a == Formula::atom("A"));
  CHECK(parse_formula("A~") == Formula::atom("A", false, true));
  CHECK(parse_formula("!A") == Formula::atom("A", true, false));
  CHECK(parse_formula("!A~") == Formula::atom("A", true, true));
  CHECK(parse_formula("I") == Formula::unit());
  CHECK(parse_formula("xY3") == Formula::atom("xY3"));
}

TEST_CASE("parse binary operators") {
  CHECK(parse_formula("A * A~") ==
        Formula::tensor(Formula::atom("A"), Formula::atom("A", false, true)));
  CHECK(parse_formula("A % A~") ==
        Formula::par(Formula::atom("A"), Formula::atom("A", false, true)));
  CHECK(parse_formula("A < A~") ==
        Formula::seq(Formula::atom("A"), Formula::atom("A", false, true)));

  // chains of one operator associate to the left
  CHECK(parse_formula("A % B % C") ==
        Formula::par(Formula::par(Formula::atom("A"), Formula::atom("B")),
                     Formula::atom("C")));
  // parentheses override
  CHECK(parse_formula("A % (B % C)") ==
        Formula::par(Formula::atom("A"),
                     Formula::par(Formula::atom("B"), Formula::atom("C"))));
  // redundant parentheses are fine
  CHECK(parse_formula("(((A)) % A~)") == parse_formula("A % A~"));
}

TEST_CASE("parse errors carry byte offsets") {
  auto offset_of = [](const std::string& text) -> std::size_t {
    try {
      parse_formula(text);
    } catch (const ParseError& e) {
      return e.offset;
    }
    FAIL("expected ParseError for: ", text);
    return static_cast<std::size_t>(-1);
  };
  CHECK(offset_of("A * B % C") == 6);   // mixing operators without parentheses
  CHECK(offset_of("(A") == 2);          // missing ')'
  CHECK(offset_of("A~~") == 2);         // trailing input
  CHECK(offset_of("I~") == 1);          // the unit is self-dual
  CHECK(offset_of("!I") == 1);          // the unit cannot be first-order
  CHECK(offset_of("A <") == 3);         // missing right operand
  CHECK(offset_of("@x") == 0);          // reserved generated-name prefix
  CHECK(offset_of("A * A") == 4);       // same polarity twice
  CHECK(offset_of("!A * A~") == 5);     // inconsistent first-order marking
  CHECK(offset_of("") == 0);
  CHECK_THROWS_AS(parse_formula("A & B"), ParseError);
}

TEST_CASE("render inverts parse") {
  for (const char* text : {
           "A",
           "A~",
           "!A",
           "!A~",
           "I",
           "A % A~",
           "(A * B) % (A~ < B~)",
           "((!P~ < !Q) * (!R~ < !S)) % ((!Q~ < !R) * (!S~ < !P))",
           "(I % I) * (A % A~)",
       }) {
    Formula f = parse_formula(text);
    CHECK(parse_formula(render(f)) == f);
  }
}

TEST_CASE("render inverts parse on generated corpus") {
  CorpusOptions opts;
  opts.count = 50;
  opts.seed = 20260814;
  for (const Formula& f : generate_corpus(opts)) {
    CAPTURE(render(f));
    CHECK(parse_formula(render(f)) == f);
  }
}

TEST_CASE("negate is an involutive De Morgan dual") {
  Formula f = parse_formula("(A * B) % (C < D)");
  CHECK(negate(f) == parse_formula("(A~ % B~) * (C~ < D~)"));
  CHECK(negate(negate(f)) == f);
  CHECK(negate(parse_formula("I")) == parse_formula("I"));
  CHECK(negate(parse_formula("!A")) == parse_formula("!A~"));

  CorpusOptions opts;
  opts.count = 30;
  opts.seed = 99;
  for (const Formula& f2 : generate_corpus(opts)) CHECK(negate(negate(f2)) == f2);
}

TEST_CASE("balance") {
  CHECK(is_balanced(parse_formula("A % A~")));
  CHECK(is_balanced(parse_formula("I")));
  CHECK(is_balanced(parse_formula("(I % I) * (A % A~)")));
  CHECK_FALSE(is_balanced(parse_formula("A")));
  CHECK_FALSE(is_balanced(parse_formula("A % B~")));
  // manually built: same name with mismatched first-order flags
  Formula bad = Formula::par(Formula::atom("A", true, false),
                             Formula::atom("A", false, true));
  CHECK_FALSE(is_balanced(bad));
  // manually built: same polarity twice
  Formula dup =
      Formula::par(Formula::atom("A"), Formula::atom("A"));
  CHECK_FALSE(is_balanced(dup));
}

TEST_CASE("leaf order and atom pairs") {
  Formula f = parse_formula("(B~ % A) * (I % (A~ < B))");
  auto leaves = leaf_order(f);
  REQUIRE(leaves.size() == 5);
  CHECK(leaves[0].name == "B");
  CHECK(leaves[0].neg);
  CHECK(leaves[1].name == "A");
  CHECK_FALSE(leaves[1].neg);
  CHECK(leaves[2].unit);
  CHECK(leaves[3].name == "A");
  CHECK(leaves[3].neg);
  CHECK(leaves[4].name == "B");
  CHECK_FALSE(leaves[4].neg);

  auto pairs = atom_pairs(f);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs.at("A") == std::pair<std::size_t, std::size_t>{1, 3});
  CHECK(pairs.at("B") == std::pair<std::size_t, std::size_t>{4, 0});
}

TEST_CASE("formula json round trip") {
  for (const char* text : {
           "A % A~",
           "((!P~ < !Q) * (!R~ < !S)) % ((!Q~ < !R) * (!S~ < !P))",
           "(I % I) * (A % A~)",
       }) {
    Formula f = parse_formula(text);
    CHECK(formula_from_json(formula_to_json(f)) == f);
  }
  CHECK_THROWS_AS(formula_from_json(Json{{"op", "frobnicate"}}), ValidationError);
}

TEST_CASE("corpus generator is deterministic and respects caps") {
  CorpusOptions opts;
  opts.count = 40;
  opts.seed = 5;
  opts.max_pairs = 4;
  opts.max_units = 1;
  auto a = generate_corpus(opts);
  auto b = generate_corpus(opts);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (const Formula& f : a) {
    CHECK(is_balanced(f));
    CHECK(atom_pairs(f).size() <= 4);
    std::size_t units = 0;
    for (const auto& l : leaf_order(f)) units += l.unit;
    CHECK(units <= 1);
  }

  CorpusOptions no_extras = opts;
  no_extras.allow_fo = false;
  no_extras.allow_units = false;
  for (const Formula& f : generate_corpus(no_extras))
    for (const auto& l : leaf_order(f)) {
      CHECK_FALSE(l.unit);
      CHECK_FALSE(l.fo);
    }

  CorpusOptions other_seed = opts;
  other_seed.seed = 6;
  CHECK(generate_corpus(other_seed) != a);
}
