#include "doctest.h"

#include "clonelab/fixtures.hpp"
#include "clonelab/verifiers.hpp"

using namespace clonelab;

TEST_SUITE("verifiers") {
  TEST_CASE("every named verifier passes with defaults") {
    for (const auto& name : verifier_names()) {
      CAPTURE(name);
      const VerifierResult r = verify(name, {});
      CHECK(r.name == name);
      CHECK(r.verdict == Verdict::pass);
      CHECK(r.elapsed_seconds >= 0);
    }
  }

  TEST_CASE("unknown names and bad parameters") {
    CHECK_THROWS_AS(verify("nope", {}), InvalidArgument);
    VerifyParams p;
    p.n = 1;
    CHECK_THROWS_AS(verify("collapse-idemp", p), InvalidArgument);
  }

  TEST_CASE("remark-cycles for p = 2") {
    VerifyParams p;
    p.p = 2;
    const auto r = verify("remark-cycles", p);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.details["candidates_scanned"] == 8);
  }

  TEST_CASE("splitting-cycles with a cyclic polymorphism checks the other branch") {
    VerifyParams p;
    p.structure = fixtures::idempotent(2);
    p.structure_name = "i2";
    p.p = 2;
    const auto r = verify("splitting-cycles", p);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.details["cyclic"] == true);
    CHECK(r.details["classes_disjoint"] == false);
    CHECK_FALSE(r.details.contains("counterexample"));
  }

  TEST_CASE("splitting-malcev with a Mal'cev polymorphism checks the other branch") {
    VerifyParams p;
    p.structure = fixtures::idempotent(2);
    const auto r = verify("splitting-malcev", p);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.details["malcev"] == true);
    CHECK_FALSE(r.details.contains("counterexample"));
  }

  TEST_CASE("budget exhaustion gives unknown with the budget attached") {
    VerifyParams p;
    p.p = 3;
    p.budget = 10;
    const auto r = verify("remark-cycles", p);
    CHECK(r.verdict == Verdict::unknown);
    CHECK(r.details["budget"] == 10);
  }

  TEST_CASE("collapse-idemp for several n") {
    for (std::size_t n = 2; n <= 5; ++n) {
      VerifyParams p;
      p.n = n;
      const auto r = verify("collapse-idemp", p);
      CHECK(r.verdict == Verdict::pass);
      CHECK(r.details["structure"]["domain"] == (1u << n));
    }
  }

  TEST_CASE("ts-properties up to 9") {
    VerifyParams p;
    p.max_ts = 9;
    CHECK(verify("ts-properties", p).verdict == Verdict::pass);
  }

  TEST_CASE("dichotomy on every small fixture") {
    for (const auto& name : fixtures::names()) {
      CAPTURE(name);
      VerifyParams p;
      p.structure = fixtures::by_name(name);
      const auto r = verify("dichotomy", p);
      CHECK(r.verdict == Verdict::pass);
      const bool one = r.details["core"]["elements"].size() == 1;
      CHECK((r.details["branch"] == "c1_constructs_a") == one);
    }
  }

  TEST_CASE("majority-search with generators that cannot reach a majority") {
    VerifyParams p;
    p.generators = {catalog::affine3()};
    const auto r = verify("majority-search", p);
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.details.contains("counterexample"));
  }
}
