#include "doctest.h"

#include "clonelab/fixtures.hpp"
#include "clonelab/term.hpp"
#include "oracles.hpp"

using namespace clonelab;

TEST_SUITE("term") {
  TEST_CASE("evaluation uses the named inputs") {
    const TermPtr f = Term::input("f", 2);
    const TermPtr t = Term::compose(f, {Term::projection(3, 2), Term::minor(f, VarMap(3, {0, 1}))});
    const Operation out = evaluate(t, {{"f", catalog::boolean_and()}});
    CHECK(out == oracle::table(2, 3, [](const auto& x) { return x[2] & x[0] & x[1]; }));
  }

  TEST_CASE("shared subterms are counted once") {
    const TermPtr f = Term::input("f", 2);
    const TermPtr m = Term::minor(f, VarMap(2, {1, 0}));
    const TermPtr t = Term::compose(f, {m, m});
    CHECK(node_count(t) == 3);
  }

  TEST_CASE("evaluator memoizes across terms") {
    TermEvaluator ev({{"m", catalog::xor3()}});
    const TermPtr m = Term::input("m", 3);
    const TermPtr a = Term::minor(m, VarMap(3, {1, 2, 0}));
    CHECK(ev(a) == catalog::xor3());
    CHECK(ev(Term::compose(m, {a, a, a})) == catalog::xor3());
  }

  TEST_CASE("malformed terms") {
    CHECK_THROWS_AS(Term::projection(2, 2), InvalidArgument);
    CHECK_THROWS_AS(Term::compose(Term::input("f", 2), {Term::projection(2, 0)}), InvalidArgument);
    CHECK_THROWS_AS(Term::compose(Term::input("f", 2), {Term::projection(2, 0), Term::projection(3, 0)}),
                    InvalidArgument);
    CHECK_THROWS_AS(evaluate(Term::input("g", 2), {{"f", catalog::boolean_and()}}), InvalidArgument);
    CHECK_THROWS_AS(evaluate(Term::input("f", 3), {{"f", catalog::boolean_and()}}), InvalidArgument);
  }
}
