#include "doctest.h"

#include "properties.hpp"

using namespace clonelab::testing;

namespace {

void expect(const PropertyReport& r) {
  INFO(r.name << ": " << r.failure);
  CHECK(r.ok);
  CHECK(r.cases > 0);
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("minor composition law") { expect(minor_composition_law(1)); }
  TEST_CASE("Galois easy inclusion") { expect(galois_easy_inclusion(2)); }
  TEST_CASE("homomorphism re-verification") { expect(homomorphism_reverification(3)); }
  TEST_CASE("JSON round trip") { expect(json_round_trip(4)); }
}
