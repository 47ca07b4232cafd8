#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "clonelab/conditions.hpp"
#include "clonelab/fixtures.hpp"
#include "oracles.hpp"

using namespace clonelab;

namespace {

bool fully_symmetric_oracle(const Operation& f) {
  const std::size_t k = f.domain(), n = f.arity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto x = oracle::digits(i, k, n);
    std::sort(x.begin(), x.end());
    do {
      std::size_t j = 0;
      for (Elem e : x) j = j * k + e;
      if (f.at(j) != f.at(i)) return false;
    } while (std::next_permutation(x.begin(), x.end()));
  }
  return true;
}

bool totally_symmetric_oracle(const Operation& f) {
  const std::size_t k = f.domain(), n = f.arity();
  std::map<std::set<Elem>, Elem> value;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = oracle::digits(i, k, n);
    const std::set<Elem> s(x.begin(), x.end());
    auto [it, fresh] = value.emplace(s, f.at(i));
    if (!fresh && it->second != f.at(i)) return false;
  }
  return true;
}

Operation random_symmetric(std::mt19937_64& rng, std::size_t k, std::size_t n, bool by_set) {
  std::map<std::vector<Elem>, Elem> chosen;
  return oracle::table(k, n, [&](const std::vector<Elem>& x) {
    std::vector<Elem> key = x;
    std::sort(key.begin(), key.end());
    if (by_set) key.erase(std::unique(key.begin(), key.end()), key.end());
    auto it = chosen.find(key);
    if (it == chosen.end()) it = chosen.emplace(key, static_cast<Elem>(rng() % k)).first;
    return it->second;
  });
}

}  // namespace

TEST_SUITE("conditions") {
  TEST_CASE("sigma_p(2) has one commutativity identity") {
    const MinorCondition c = conditions::sigma_p(2);
    REQUIRE(c.symbols().size() == 1);
    CHECK(c.symbols()[0].second == 2);
    REQUIRE(c.identities().size() == 1);
    const auto& id = c.identities()[0];
    CHECK(id.variables() == 2);
    CHECK(id.lhs_map.map == std::vector<std::size_t>{0, 1});
    CHECK(id.rhs_map.map == std::vector<std::size_t>{1, 0});
  }

  TEST_CASE("gm(3) extends fs(3) by f(x,x,z) = f(y,y,z)") {
    const MinorCondition g = conditions::gm(3);
    const MinorCondition f = conditions::fs(3);
    REQUIRE(g.identities().size() == f.identities().size() + 1);
    for (std::size_t i = 0; i < f.identities().size(); ++i) {
      CHECK(g.identities()[i] == f.identities()[i]);
    }
    const auto& last = g.identities().back();
    CHECK(last.variables() == 3);
    CHECK(last.lhs_map.map == std::vector<std::size_t>{0, 0, 2});
    CHECK(last.rhs_map.map == std::vector<std::size_t>{1, 1, 2});
  }

  TEST_CASE("bad parameters throw") {
    CHECK_THROWS_AS(conditions::sigma_p(1), InvalidArgument);
    CHECK_THROWS_AS(conditions::gm(4), InvalidArgument);
    CHECK_THROWS_AS(conditions::builtin("nope"), InvalidArgument);
  }

  TEST_CASE("ts(2), fs(2) and sigma_p(2) agree") {
    for (const auto& f : enumerate_operations(3, 2, Symmetry::none)) {
      const bool s = satisfies(f, conditions::sigma_p(2));
      CHECK(satisfies(f, conditions::fs(2)) == s);
      CHECK(satisfies(f, conditions::ts(2)) == s);
    }
  }

  TEST_CASE("fs(n) and ts(n) match the full permutation and value-set definitions") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 2; n <= 5; ++n) {
      for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 2 + trial % 2;
        const Operation any = oracle::table(k, n, [&](const auto&) { return rng() % k; });
        const Operation sym = random_symmetric(rng, k, n, false);
        const Operation tot = random_symmetric(rng, k, n, true);
        for (const auto& f : {any, sym, tot}) {
          CHECK(satisfies(f, conditions::fs(n)) == fully_symmetric_oracle(f));
          CHECK(satisfies(f, conditions::ts(n)) == totally_symmetric_oracle(f));
        }
      }
    }
  }

  TEST_CASE("satisfies") {
    CHECK(satisfies(catalog::boolean_and(), conditions::sigma_p(2)));
    CHECK(satisfies(catalog::xor3(), conditions::quasi_minority()));
    CHECK_FALSE(satisfies(make_projection(2, 3, 1), conditions::quasi_malcev()));
    CHECK(satisfies(catalog::affine3(), conditions::quasi_malcev()));
    CHECK(satisfies(catalog::dual_discriminator(3), conditions::quasi_majority()));
  }

  TEST_CASE("majority is symmetric but not totally symmetric") {
    CHECK(satisfies(catalog::boolean_majority(), conditions::fs(3)));
    CHECK_FALSE(satisfies(catalog::boolean_majority(), conditions::ts(3)));
  }

  TEST_CASE("violations name the identity and valuation") {
    const MinorCondition c = conditions::quasi_malcev();
    const Assignment a{{c.symbols()[0].first, make_projection(2, 3, 1)}};
    const auto v = find_violation(a, c);
    REQUIRE(v);
    const auto& id = c.identities()[v->identity];
    CHECK(v->lhs_value != v->rhs_value);
    CHECK(v->valuation.size() == id.variables());
    CHECK_FALSE(v->describe(c).empty());
    CHECK_THROWS_AS(find_violation({}, c), InvalidArgument);
  }

  TEST_CASE("renaming shared variables does not change satisfaction") {
    const MinorCondition c = conditions::quasi_majority();
    std::vector<MinorIdentity> renamed;
    for (const auto& id : c.identities()) {
      std::vector<std::size_t> perm(id.variables());
      std::iota(perm.rbegin(), perm.rend(), 0);
      const VarMap p(id.variables(), perm);
      renamed.push_back({id.lhs, id.lhs_map.followed_by(p), id.rhs, id.rhs_map.followed_by(p)});
    }
    const MinorCondition r("renamed", c.symbols(), renamed);
    for (const auto& f : enumerate_operations(2, 3, Symmetry::none)) {
      CHECK(satisfies(f, c) == satisfies(f, r));
    }
  }

  TEST_CASE("rotating a cyclic operation keeps it cyclic") {
    const VarMap rot(3, {1, 2, 0});
    for (const auto& f : enumerate_operations(2, 3, Symmetry::cyclic)) {
      CHECK(satisfies(minor(f, rot), conditions::sigma_p(3)));
    }
  }

  TEST_CASE("idempotent quasi near-unanimity operations are near-unanimity operations") {
    for (const auto& f : enumerate_operations(2, 3, Symmetry::none, is_idempotent)) {
      if (!satisfies(f, conditions::qnu(3))) continue;
      for (Elem x = 0; x < 2; ++x)
        for (Elem y = 0; y < 2; ++y) {
          CHECK(f({x, x, y}) == x);
          CHECK(f({x, y, x}) == x);
          CHECK(f({y, x, x}) == x);
        }
    }
  }

  TEST_CASE("find_witness") {
    const auto c2 = find_witness(fixtures::cycle(2), Symmetry::cyclic, conditions::sigma_p(2));
    CHECK_FALSE(c2.witness);
    CHECK(c2.definitive);
    CHECK(c2.candidates_scanned == 8);

    const auto c3 = find_witness(fixtures::cycle(3), Symmetry::cyclic, conditions::sigma_p(3));
    CHECK_FALSE(c3.witness);
    CHECK(c3.definitive);
    CHECK(c3.candidates_scanned == 177147);

    const auto pool = enumerate_operations(2, 2, Symmetry::none, is_idempotent);
    const auto w = find_witness(pool, conditions::ts(2));
    REQUIRE(w.witness);
    const Operation& f = w.witness->begin()->second;
    CHECK((f == catalog::boolean_and() || f == catalog::boolean_or()));

    const auto cut = find_witness(fixtures::cycle(3), Symmetry::cyclic, conditions::sigma_p(3), 10);
    CHECK_FALSE(cut.witness);
    CHECK_FALSE(cut.definitive);

    const auto b2 = find_witness(fixtures::b2(), Symmetry::cyclic, conditions::sigma_p(2));
    REQUIRE(b2.witness);
    CHECK(is_polymorphism(b2.witness->begin()->second, fixtures::b2()));
  }
}
