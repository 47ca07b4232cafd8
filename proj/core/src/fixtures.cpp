#include "clonelab/fixtures.hpp"

#include <map>
#include <set>

namespace clonelab {

namespace fixtures {

namespace {

Relation graph(std::size_t k, const std::vector<std::vector<Elem>>& cycles) {
  std::vector<Elem> image(k);
  for (Elem x = 0; x < k; ++x) image[x] = x;
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) image[c[i]] = c[(i + 1) % c.size()];
  }
  std::vector<Tuple> tuples;
  for (Elem x = 0; x < k; ++x) tuples.push_back({x, image[x]});
  return Relation(k, 2, std::move(tuples));
}

}  // namespace

Structure b2() {
  Structure s(2);
  s.add("c0", Relation(2, 1, {{0}}));
  s.add("c1", Relation(2, 1, {{1}}));
  s.add("R", Relation(2, 2, {{0, 1}, {1, 0}, {1, 1}}));
  return s;
}

Structure cycle(std::size_t p) {
  if (p < 1) throw InvalidArgument("cycle length must be positive");
  std::vector<Tuple> edges;
  for (Elem i = 0; i < p; ++i) edges.push_back({i, static_cast<Elem>((i + 1) % p)});
  Structure s(p);
  s.add("R", Relation(p, 2, std::move(edges)));
  return s;
}

Structure idempotent(std::size_t n) {
  if (n < 1) throw InvalidArgument("idempotent structure needs n >= 1");
  Structure s(n);
  for (Elem i = 0; i < n; ++i) s.add("c" + std::to_string(i), Relation(n, 1, {{i}}));
  return s;
}

Structure c1() { return cycle(1); }

Structure k21() {
  enum : Elem { a = 11, b, c, d, e, f, g, h, i, j };
  Structure s(21);
  s.add("R", graph(21, {{0, 1, 2}, {5, 6, 7}, {8, 9, 10}, {e, b, a}, {d, g, i}, {f, h, c}}));
  s.add("S", graph(21, {{1, 4}, {2, 3}, {5, 6}, {7, 8}, {j, e}, {b, c}, {a, d}, {i, f}}));
  return s;
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"b2", "c2", "c3", "c4", "i2", "i3", "c1", "k21"};
  return all;
}

Structure by_name(std::string_view name) {
  if (name == "b2") return b2();
  if (name == "c1") return c1();
  if (name == "c2") return cycle(2);
  if (name == "c3") return cycle(3);
  if (name == "c4") return cycle(4);
  if (name == "i2") return idempotent(2);
  if (name == "i3") return idempotent(3);
  if (name == "k21") return k21();
  throw InvalidArgument("unknown fixture '" + std::string(name) + "'");
}

}  // namespace fixtures

namespace catalog {

namespace {

Elem rainbow_or(std::span<const Elem> x, Elem c, bool majority) {
  if (x[0] == x[1]) return majority ? x[0] : x[2];
  if (x[0] == x[2]) return majority ? x[0] : x[1];
  if (x[1] == x[2]) return majority ? x[1] : x[0];
  return c;
}

}  // namespace

Operation boolean_and() {
  return Operation::tabulate(2, 2, [](std::span<const Elem> x) { return x[0] & x[1]; });
}

Operation boolean_or() {
  return Operation::tabulate(2, 2, [](std::span<const Elem> x) { return x[0] | x[1]; });
}

Operation xor2() {
  return Operation::tabulate(2, 2, [](std::span<const Elem> x) { return x[0] ^ x[1]; });
}

Operation xor3() {
  return Operation::tabulate(2, 3, [](std::span<const Elem> x) { return x[0] ^ x[1] ^ x[2]; });
}

Operation boolean_majority() {
  return Operation::tabulate(2, 3, [](std::span<const Elem> x) {
    return static_cast<Elem>(x[0] + x[1] + x[2] >= 2);
  });
}

Operation affine3() {
  return Operation::tabulate(3, 3, [](std::span<const Elem> x) {
    return static_cast<Elem>((x[0] + 3 - x[1] + x[2]) % 3);
  });
}

Operation dual_discriminator(std::size_t k) {
  return Operation::tabulate(k, 3,
                             [](std::span<const Elem> x) { return x[0] == x[1] ? x[0] : x[2]; });
}

Operation minimum(std::size_t k) {
  return Operation::tabulate(k, 2, [](std::span<const Elem> x) { return std::min(x[0], x[1]); });
}

Operation symmetric_majority(Elem c) {
  if (c > 2) throw InvalidArgument("rainbow value must be 0, 1 or 2");
  return Operation::tabulate(3, 3, [c](std::span<const Elem> x) { return rainbow_or(x, c, true); });
}

Operation symmetric_minority(Elem c) {
  if (c > 2) throw InvalidArgument("rainbow value must be 0, 1 or 2");
  return Operation::tabulate(3, 3,
                             [c](std::span<const Elem> x) { return rainbow_or(x, c, false); });
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{
      "and",    "or",     "xor2",   "xor3",   "majority2", "affine3", "dd3",   "min3",
      "maj3c0", "maj3c1", "maj3c2", "min3c0", "min3c1",    "min3c2"};
  return all;
}

Operation by_name(std::string_view name) {
  if (name == "and") return boolean_and();
  if (name == "or") return boolean_or();
  if (name == "xor2") return xor2();
  if (name == "xor3") return xor3();
  if (name == "majority2") return boolean_majority();
  if (name == "affine3") return affine3();
  if (name == "dd3") return dual_discriminator(3);
  if (name == "min3") return minimum(3);
  for (Elem c = 0; c < 3; ++c) {
    if (name == "maj3c" + std::to_string(c)) return symmetric_majority(c);
    if (name == "min3c" + std::to_string(c)) return symmetric_minority(c);
  }
  throw InvalidArgument("unknown catalog operation '" + std::string(name) + "'");
}

}  // namespace catalog

}  // namespace clonelab
