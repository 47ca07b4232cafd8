#include "doctest.h"

#include <set>

#include "clonelab/fixtures.hpp"
#include "clonelab/ops.hpp"
#include "oracles.hpp"

using namespace clonelab;

TEST_SUITE("ops") {
  TEST_CASE("table index puts x_1 first") {
    const Operation f = oracle::table(3, 2, [](const auto& x) { return x[0]; });
    CHECK(f.at(1 * 3 + 2) == 1);
    CHECK(f({2, 0}) == 2);
    CHECK(make_projection(3, 2, 1) == f);
  }

  TEST_CASE("constructor rejects bad tables") {
    CHECK_THROWS_AS(Operation(2, 2, {0, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(Operation(2, 1, {0, 2}), InvalidArgument);
    CHECK_THROWS_AS(Operation(2, 0, {0}), InvalidArgument);
  }

  TEST_CASE("minor of a projection is a projection") {
    const VarMap sigma(2, {0, 1, 1});
    CHECK(minor(make_projection(2, 3, 3), sigma) == make_projection(2, 2, 2));
    CHECK(minor(make_projection(3, 3, 1), sigma) == make_projection(3, 2, 1));
  }

  TEST_CASE("xor with both variables identified is constant 0") {
    CHECK(minor(catalog::xor2(), VarMap(1, {0, 0})) == make_constant(2, 1, 0));
  }

  TEST_CASE("majority with first two arguments identified is the first projection") {
    CHECK(minor(catalog::boolean_majority(), VarMap(2, {0, 0, 1})) == make_projection(2, 2, 1));
  }

  TEST_CASE("minor checks arities") {
    CHECK_THROWS_AS(minor(catalog::xor2(), VarMap(2, {0, 1, 1})), InvalidArgument);
    CHECK_THROWS_AS(VarMap(2, {0, 2}), InvalidArgument);
  }

  TEST_CASE("compose") {
    const Operation f = catalog::xor3();
    const std::vector<Operation> pr{make_projection(2, 3, 1), make_projection(2, 3, 2),
                                    make_projection(2, 3, 3)};
    CHECK(compose(f, pr) == f);

    const std::vector<Operation> gs{catalog::xor2(), catalog::boolean_and()};
    CHECK(compose(make_projection(2, 2, 1), gs) == catalog::xor2());

    const std::vector<Operation> inner{catalog::xor2(), make_projection(2, 2, 1)};
    const Operation h = compose(catalog::boolean_and(), inner);
    CHECK(h({1, 1}) == 0);
    CHECK(h == oracle::table(2, 2, [](const auto& x) { return (x[0] ^ x[1]) & x[0]; }));

    const std::vector<Operation> bad{catalog::xor2()};
    CHECK_THROWS_AS(compose(catalog::boolean_and(), bad), InvalidArgument);
    const std::vector<Operation> mixed{catalog::xor2(), catalog::minimum(3)};
    CHECK_THROWS_AS(compose(catalog::boolean_and(), mixed), InvalidArgument);
  }

  TEST_CASE("is_idempotent") {
    CHECK(is_idempotent(catalog::boolean_and()));
    CHECK_FALSE(is_idempotent(catalog::xor2()));
    CHECK_FALSE(is_idempotent(make_constant(3, 2, 0)));
    CHECK(is_idempotent(catalog::affine3()));
  }

  TEST_CASE("enumerate_operations") {
    const auto cyc = enumerate_operations(2, 2, Symmetry::cyclic, is_idempotent);
    REQUIRE(cyc.size() == 2);
    const std::set<Operation> got(cyc.begin(), cyc.end());
    CHECK(got == std::set<Operation>{catalog::boolean_and(), catalog::boolean_or()});

    CHECK(enumerate_operations(2, 1, Symmetry::none).size() == 4);
    CHECK(enumerate_operations(3, 2, Symmetry::cyclic).size() == 729);
    CHECK(OperationSpace(3, 3, Symmetry::cyclic).size() == oracle::pow(3, 11));
    CHECK(OperationSpace(2, 3, Symmetry::fully_symmetric).orbit_count() == 4);
    CHECK_THROWS_AS(OperationSpace(3, 3, Symmetry::none, 1000), CapExceeded);
  }

  TEST_CASE("cyclic enumeration yields exactly the cyclic tables") {
    std::size_t cyclic = 0;
    enumerate_operations(
        2, 3, Symmetry::none,
        [](const Operation& f) { return minor(f, VarMap(3, {1, 2, 0})) == f; },
        [&](const Operation&) {
          ++cyclic;
          return true;
        });
    CHECK(cyclic == enumerate_operations(2, 3, Symmetry::cyclic).size());
  }

  TEST_CASE("generate_clone") {
    CloneOptions o;
    o.max_arity = 2;
    const auto p = generate_clone(2, {}, o);
    CHECK(p.fixed_point);
    CHECK(p.operations.size() == 3);

    o.max_arity = 3;
    const std::vector<Operation> x{catalog::xor3()};
    const auto c = generate_clone(2, x, o);
    CHECK(c.fixed_point);
    // Odd-size variable subsets: 1, 2 and 4 tables at arities 1, 2, 3.
    CHECK(c.operations.size() == 7);
    std::size_t arity3 = 0;
    for (const auto& f : c.operations) {
      if (f.arity() != 3) continue;
      ++arity3;
      const bool is_odd_xor = f == make_projection(2, 3, 1) || f == make_projection(2, 3, 2) ||
                              f == make_projection(2, 3, 3) || f == catalog::xor3();
      CHECK(is_odd_xor);
    }
    CHECK(arity3 == 4);

    o.max_arity = 2;
    const std::vector<Operation> m{catalog::boolean_majority()};
    const auto mc = generate_clone(2, m, o);
    CHECK(mc.fixed_point);
    CHECK(mc.operations.size() == 3);
  }

  TEST_CASE("generate_clone honours min_arity, budget and stop_when") {
    CloneOptions o;
    o.min_arity = 3;
    o.max_arity = 3;
    const std::vector<Operation> x{catalog::xor3()};
    const auto c = generate_clone(2, x, o);
    CHECK(c.operations.size() == 4);

    const std::vector<Operation> big{catalog::minimum(3), catalog::affine3()};
    o.budget = 20;
    const auto b = generate_clone(3, big, o);
    CHECK_FALSE(b.fixed_point);

    CloneOptions s;
    s.stop_when = [](const Operation& f) { return f == catalog::xor3(); };
    const auto st = generate_clone(2, x, s);
    REQUIRE(st.stopped_at);
    CHECK(*st.stopped_at == catalog::xor3());
  }

  TEST_CASE("VarMap composition") {
    const VarMap a(3, {2, 0});
    const VarMap b(2, {1, 1, 0});
    CHECK(a.followed_by(b).map == std::vector<std::size_t>{0, 1});
    CHECK(a.followed_by(b).target_arity == 2);
    CHECK(VarMap::identity(3).map == std::vector<std::size_t>{0, 1, 2});
  }
}
