#include "clonelab/constructions.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace clonelab {

ConditionFailure::ConditionFailure(std::string role, std::string condition, std::string detail)
    : Error(role + " fails " + condition + ": " + detail),
      role_(std::move(role)),
      condition_(std::move(condition)) {}

void require(const Operation& f, const MinorCondition& condition, const std::string& role) {
  if (condition.symbols().size() != 1) {
    throw InvalidArgument("require: condition must have exactly one symbol");
  }
  const auto& [symbol, arity] = condition.symbols().front();
  if (f.arity() != arity) {
    throw ConditionFailure(role, condition.name(),
                           "arity " + std::to_string(f.arity()) + " where " +
                               std::to_string(arity) + " is required");
  }
  if (auto v = find_violation({{symbol, f}}, condition)) {
    throw ConditionFailure(role, condition.name(), v->describe(condition));
  }
}

void require_idempotent(const Operation& f, const std::string& role) {
  for (Elem a = 0; a < f.domain(); ++a) {
    Tuple t(f.arity(), a);
    if (f(t) != a) {
      throw ConditionFailure(role, "idempotency",
                             "value " + std::to_string(f(t)) + " at " + tuple_to_string(t));
    }
  }
}

namespace {

void require_domain(const Operation& f, std::size_t k, const std::string& role) {
  if (f.domain() != k) {
    throw InvalidArgument(role + " has domain " + std::to_string(f.domain()) + ", expected " +
                          std::to_string(k));
  }
}

void require_arity(const Operation& f, std::size_t n, const std::string& role) {
  if (f.arity() != n) {
    throw InvalidArgument(role + " has arity " + std::to_string(f.arity()) + ", expected " +
                          std::to_string(n));
  }
}

TermPtr in(const std::string& name, std::size_t arity) { return Term::input(name, arity); }

TermPtr mn(const TermPtr& of, std::size_t target, std::vector<std::size_t> map) {
  return Term::minor(of, VarMap(target, std::move(map)));
}

TermPtr proj(std::size_t n, std::size_t i) { return Term::projection(n, i); }

// Table index -> first tuple where two operations differ.
std::optional<Tuple> first_difference(const Operation& a, const Operation& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.at(i) != b.at(i)) {
      Tuple t(a.arity());
      decode_index(i, a.domain(), t);
      return t;
    }
  }
  return std::nullopt;
}

// c2(c3(q(x,y,z), q(y,z,x), q(z,x,y)), c3(q(x,z,y), q(z,y,x), q(y,x,z)))
TermPtr heart(const std::string& q) {
  auto qt = in(q, 3);
  auto c3 = in("c3", 3);
  auto left = Term::compose(c3, {mn(qt, 3, {0, 1, 2}), mn(qt, 3, {1, 2, 0}), mn(qt, 3, {2, 0, 1})});
  auto right =
      Term::compose(c3, {mn(qt, 3, {0, 2, 1}), mn(qt, 3, {2, 1, 0}), mn(qt, 3, {1, 0, 2})});
  return Term::compose(in("c2", 2), {left, right});
}

Built symmetrize(const std::string& role, const MinorCondition& kind, const Operation& q,
                 const Operation& c2, const Operation& c3, const ConstructionOptions& options) {
  require_arity(q, 3, role);
  require_arity(c2, 2, "c2");
  require_arity(c3, 3, "c3");
  require_domain(c2, q.domain(), "c2");
  require_domain(c3, q.domain(), "c3");
  if (options.verify_preconditions) {
    require(q, kind, role);
    require_idempotent(q, role);
    require(c2, conditions::sigma_p(2), "c2");
    require_idempotent(c2, "c2");
    require(c3, conditions::sigma_p(3), "c3");
    require_idempotent(c3, "c3");
  }
  Inputs inputs{{role, q}, {"c2", c2}, {"c3", c3}};
  auto term = heart(role);
  auto op = evaluate(term, inputs);
  require(op, conditions::fs(3), "output");
  require(op, kind, "output");
  require_idempotent(op, "output");
  return {std::move(op), std::move(term), std::move(inputs)};
}

void require_symmetric_minority(const Operation& m3, const std::string& role) {
  require_domain(m3, 3, role);
  require(m3, conditions::quasi_minority(), role);
  require_idempotent(m3, role);
  require(m3, conditions::fs(3), role);
}

void require_symmetric_majority(const Operation& m3, const std::string& role) {
  require_domain(m3, 3, role);
  require(m3, conditions::quasi_majority(), role);
  require_idempotent(m3, role);
  require(m3, conditions::fs(3), role);
}

TermPtr d_switch_term() {
  auto m = in("m3", 3);
  return Term::compose(m, {m, proj(3, 1), proj(3, 2)});
}

std::string gm_name(std::size_t l) { return "m" + std::to_string(l); }
std::string ts_name(std::size_t n) { return "s" + std::to_string(n); }

}  // namespace

Built symmetrize_majority(const Operation& quasi_majority_op, const Operation& c2,
                          const Operation& c3, const ConstructionOptions& options) {
  return symmetrize("quasi_majority", conditions::quasi_majority(), quasi_majority_op, c2, c3,
                    options);
}

Built symmetrize_minority(const Operation& minority, const Operation& c2, const Operation& c3,
                          const ConstructionOptions& options) {
  return symmetrize("minority", conditions::quasi_minority(), minority, c2, c3, options);
}

Built minority_from_malcev_majority(const Operation& d, const Operation& majority,
                                   const ConstructionOptions& options) {
  require_arity(d, 3, "malcev");
  require_arity(majority, 3, "majority");
  require_domain(majority, d.domain(), "majority");
  if (options.verify_preconditions) {
    require(d, conditions::quasi_malcev(), "malcev");
    require_idempotent(d, "malcev");
    require(majority, conditions::quasi_majority(), "majority");
    require_idempotent(majority, "majority");
  }
  Inputs inputs{{"malcev", d}, {"majority", majority}};
  auto dt = in("malcev", 3);
  auto term = Term::compose(in("majority", 3), {dt, mn(dt, 3, {1, 2, 0}), mn(dt, 3, {2, 0, 1})});
  auto op = evaluate(term, inputs);
  require(op, conditions::quasi_minority(), "output");
  require_idempotent(op, "output");
  return {std::move(op), std::move(term), std::move(inputs)};
}

Elem constant_of_symmetric(const Operation& m3, const ConstructionOptions& options) {
  require_domain(m3, 3, "symmetric");
  require_arity(m3, 3, "symmetric");
  if (options.verify_preconditions) require(m3, conditions::fs(3), "symmetric");
  std::array<Elem, 3> t{0, 1, 2};
  const Elem c = m3(t);
  while (std::next_permutation(t.begin(), t.end())) {
    if (m3(t) != c) {
      throw ConditionFailure("symmetric", "constant rainbow value",
                             "value " + std::to_string(m3(t)) + " at " +
                                 tuple_to_string(Tuple(t.begin(), t.end())) + " but " +
                                 std::to_string(c) + " at (0,1,2)");
    }
  }
  return c;
}

Operation d_switch_closed_form(Elem c) {
  if (c > 2) throw InvalidArgument("d_switch_closed_form: c must be 0, 1 or 2");
  const Elem c1 = (c + 1) % 3, c2 = (c + 2) % 3;
  return Operation::tabulate(3, 3, [&](std::span<const Elem> x) -> Elem {
    const Tuple t(x.begin(), x.end());
    if (t == Tuple{c2, c, c1} || t == Tuple{c2, c1, c}) return c1;
    if (t == Tuple{c1, c, c2} || t == Tuple{c1, c2, c}) return c2;
    return x[0];
  });
}

Built d_switch(const Operation& m3, const ConstructionOptions& options) {
  require_arity(m3, 3, "m3");
  if (options.verify_preconditions) require_symmetric_minority(m3, "m3");
  Inputs inputs{{"m3", m3}};
  auto term = d_switch_term();
  auto op = evaluate(term, inputs);
  const Elem c = constant_of_symmetric(m3, {false});
  if (auto t = first_difference(op, d_switch_closed_form(c))) {
    throw ConditionFailure("output", "d_switch closed form", "differs at " + tuple_to_string(*t));
  }
  return {std::move(op), std::move(term), std::move(inputs)};
}

std::vector<Built> generalized_minority_chain(const Operation& m3, std::size_t max_arity,
                                              const ConstructionOptions& options) {
  if (max_arity < 3 || max_arity % 2 == 0) {
    throw InvalidArgument("generalized minority arity must be odd and at least 3");
  }
  require_arity(m3, 3, "m3");
  require_domain(m3, 3, "m3");
  if (options.verify_preconditions) require_symmetric_minority(m3, "m3");

  const Inputs inputs{{"m3", m3}};
  TermEvaluator ev(inputs);
  const auto m = in("m3", 3);
  const auto d = d_switch_term();

  std::vector<Built> chain;
  chain.push_back({m3, m, inputs});
  for (std::size_t n = 5; n <= max_arity; n += 2) {
    const auto& prev = chain.back().term;
    std::vector<std::size_t> shrink{0};
    for (std::size_t j = 3; j < n; ++j) shrink.push_back(j);
    auto u = mn(prev, n, shrink);
    auto x1 = proj(n, 0);
    auto t = Term::compose(m, {Term::compose(d, {u, x1, x1}), Term::compose(d, {u, x1, proj(n, 1)}),
                               Term::compose(d, {u, x1, proj(n, 2)})});
    std::vector<std::size_t> swap_first{1, 0, 2}, rotate_first{2, 0, 1};
    for (std::size_t j = 3; j < n; ++j) {
      swap_first.push_back(j);
      rotate_first.push_back(j);
    }
    auto term = Term::compose(m, {t, mn(t, n, swap_first), mn(t, n, rotate_first)});
    Operation op = ev(term);
    require(op, conditions::gm(n), "output");
    require_idempotent(op, "output");
    if (n == 5) {
      if (auto v = star_one_violation(op, m3)) {
        throw ConditionFailure("output", "m5(x1,x,x,x4,x5) = m3(x1,x4,x5)",
                               "fails at " + tuple_to_string(*v));
      }
      if (auto v = star_two_violation(op)) {
        throw ConditionFailure("output", "m5(x1,x2,x3,x1,x2) = x3",
                               "fails at " + tuple_to_string(*v));
      }
    }
    chain.push_back({std::move(op), std::move(term), inputs});
  }
  return chain;
}

Built generalized_minority(const Operation& m3, std::size_t n, const ConstructionOptions& options) {
  auto chain = generalized_minority_chain(m3, n, options);
  return std::move(chain.back());
}

std::optional<Tuple> star_one_violation(const Operation& m5, const Operation& m3) {
  require_arity(m5, 5, "m5");
  require_arity(m3, 3, "m3");
  const std::size_t k = m5.domain();
  Tuple v(4);
  for (std::uint64_t i = 0; i < k * k * k * k; ++i) {
    decode_index(i, k, v);
    if (m5({v[0], v[1], v[1], v[2], v[3]}) != m3({v[0], v[2], v[3]})) return v;
  }
  return std::nullopt;
}

std::optional<Tuple> star_two_violation(const Operation& m5) {
  require_arity(m5, 5, "m5");
  const std::size_t k = m5.domain();
  Tuple v(3);
  for (std::uint64_t i = 0; i < k * k * k; ++i) {
    decode_index(i, k, v);
    if (m5({v[0], v[1], v[2], v[0], v[1]}) != v[2]) return v;
  }
  return std::nullopt;
}

std::optional<std::string> ts_property_violation(const Operation& sn, const Operation& s2,
                                                 const Operation& m, Elem c) {
  require_domain(sn, 3, "s_n");
  const Elem rainbow = m({s2({0, c}), s2({1, c}), s2({2, c})});
  Tuple t(sn.arity());
  for (std::size_t i = 0; i < sn.size(); ++i) {
    decode_index(i, 3, t);
    std::set<Elem> values(t.begin(), t.end());
    Elem expected;
    if (values.size() == 3) {
      expected = rainbow;
    } else {
      const Elem a = *values.begin(), b = *values.rbegin();
      expected = s2({a, b});
    }
    if (sn.at(i) != expected) {
      return "value " + std::to_string(sn.at(i)) + " at " + tuple_to_string(t) + ", expected " +
             std::to_string(expected);
    }
  }
  return std::nullopt;
}

std::vector<Built> totally_symmetric_chain(const Operation& m, const Operation& majority,
                                           const Operation& s2, std::size_t max_arity,
                                           const ConstructionOptions& options) {
  if (max_arity < 2) throw InvalidArgument("totally symmetric chain needs max arity >= 2");
  require_arity(m, 3, "minority");
  require_arity(majority, 3, "majority");
  require_arity(s2, 2, "s2");
  require_domain(m, 3, "minority");
  require_domain(majority, 3, "majority");
  require_domain(s2, 3, "s2");
  if (options.verify_preconditions) {
    require_symmetric_minority(m, "minority");
    require_symmetric_majority(majority, "majority");
    require(s2, conditions::sigma_p(2), "s2");
    require_idempotent(s2, "s2");
  }
  const Elem c = constant_of_symmetric(majority, {false});

  const Inputs inputs{{"minority", m}, {"majority", majority}, {"s2", s2}};
  TermEvaluator ev(inputs);
  const auto mt = in("minority", 3);
  const auto mc = in("majority", 3);

  std::vector<Built> chain;
  chain.push_back({s2, in("s2", 2), inputs});
  for (std::size_t n = 3; n <= max_arity; ++n) {
    const auto& prev = chain.back().term;
    auto middle = mn(mc, n, {0, 1, 2});
    std::vector<TermPtr> branches;
    for (std::size_t i = 0; i < 3; ++i) {
      std::vector<TermPtr> args{proj(n, i), middle};
      for (std::size_t j = 3; j < n; ++j) args.push_back(proj(n, j));
      branches.push_back(Term::compose(prev, std::move(args)));
    }
    auto term = Term::compose(mt, std::move(branches));
    Operation op = ev(term);
    require(op, conditions::ts(n), "output");
    if (auto why = ts_property_violation(op, s2, m, c)) {
      throw ConditionFailure("output", "value-set law of s" + std::to_string(n), *why);
    }
    chain.push_back({std::move(op), std::move(term), inputs});
  }
  return chain;
}

PolyRep poly_rep(const Operation& f) {
  require_domain(f, 2, "poly_rep input");
  require_idempotent(f, "poly_rep input");
  const std::size_t n = f.arity();
  std::vector<std::uint8_t> coeff(f.table().begin(), f.table().end());
  for (std::size_t bit = 1; bit < coeff.size(); bit <<= 1) {
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      if (i & bit) coeff[i] ^= coeff[i ^ bit];
    }
  }
  PolyRep rep;
  rep.variable_count = n;
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (!coeff[i]) continue;
    std::vector<std::size_t> w;
    for (std::size_t v = 1; v <= n; ++v) {
      if (i >> (n - v) & 1) w.push_back(v);
    }
    rep.monomials.push_back(std::move(w));
  }
  std::sort(rep.monomials.begin(), rep.monomials.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  if (reconstruct(rep) != f) throw ConditionFailure("output", "poly_rep", "reconstruction differs");
  if (rep.monomials.size() % 2 == 0) {
    throw ConditionFailure("output", "poly_rep", "even monomial count");
  }
  if (!rep.monomials.empty() && rep.monomials.front().empty()) {
    throw ConditionFailure("output", "poly_rep", "constant monomial");
  }
  return rep;
}

Operation reconstruct(const PolyRep& rep) {
  if (rep.variable_count < 1) throw InvalidArgument("reconstruct: no variables");
  return Operation::tabulate(2, rep.variable_count, [&](std::span<const Elem> x) -> Elem {
    Elem acc = 0;
    for (const auto& w : rep.monomials) {
      Elem term = 1;
      for (std::size_t v : w) {
        if (v < 1 || v > rep.variable_count) throw InvalidArgument("monomial variable out of range");
        term &= x[v - 1];
      }
      acc ^= term;
    }
    return acc;
  });
}

const Operation& SymmetricChainPair::s(std::size_t n) const {
  if (n < 2 || n > max_ts_arity()) {
    throw InvalidArgument("no s_" + std::to_string(n) + " in the chain");
  }
  return ts_chain[n - 2];
}

const Operation& SymmetricChainPair::m(std::size_t l) const {
  if (l < 3 || l % 2 == 0 || l > max_gm_arity()) {
    throw InvalidArgument("no m_" + std::to_string(l) + " in the chain");
  }
  return gm_chain[(l - 3) / 2];
}

namespace {

// Map from n variables onto n - |merged| that sends each merged position to
// `keep` and closes the gaps.
VarMap identify(std::size_t n, std::size_t keep, std::initializer_list<std::size_t> merged) {
  std::vector<std::size_t> map(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t below = 0;
    bool is_merged = false;
    for (std::size_t q : merged) {
      if (q < p) ++below;
      if (q == p) is_merged = true;
    }
    map[p] = is_merged ? keep : p - below;
  }
  return VarMap(n - merged.size(), std::move(map));
}

std::string check_identification(const Operation& big, const VarMap& sigma, const Operation& small,
                                 const std::string& what) {
  if (auto t = first_difference(minor(big, sigma), small)) {
    return what + " differs at " + tuple_to_string(*t);
  }
  return {};
}

}  // namespace

ChainCheck verify_chain_compatibility(const SymmetricChainPair& chains) {
  const std::size_t k = chains.domain;
  auto fail = [](std::string why) { return ChainCheck{false, std::move(why)}; };
  auto valid = [&](const Operation& f, std::size_t n, const MinorCondition& cond,
                   const std::string& name) -> std::string {
    if (f.domain() != k || f.arity() != n) return name + " has the wrong shape";
    if (auto v = find_violation({{cond.symbols().front().first, f}}, cond)) {
      return name + ": " + v->describe(cond);
    }
    if (!is_idempotent(f)) return name + " is not idempotent";
    return {};
  };

  for (std::size_t n = 2; n <= chains.max_ts_arity() && !chains.ts_chain.empty(); ++n) {
    if (auto why = valid(chains.s(n), n, conditions::ts(n), ts_name(n)); !why.empty()) {
      return fail(why);
    }
  }
  for (std::size_t l = 3; l <= chains.max_gm_arity() && !chains.gm_chain.empty(); l += 2) {
    if (auto why = valid(chains.m(l), l, conditions::gm(l), gm_name(l)); !why.empty()) {
      return fail(why);
    }
  }

  const Operation id = make_projection(k, 1, 1);
  for (std::size_t n = 2; n <= chains.max_ts_arity() && !chains.ts_chain.empty(); ++n) {
    const Operation& smaller = n == 2 ? id : chains.s(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto why = check_identification(
            chains.s(n), identify(n, i, {j}), smaller,
            "identifying x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1) + " in " +
                ts_name(n));
        if (!why.empty()) return fail(why);
      }
    }
  }
  for (std::size_t l = 3; l <= chains.max_gm_arity() && !chains.gm_chain.empty(); l += 2) {
    const Operation& smaller = l == 3 ? id : chains.m(l - 2);
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = i + 1; j < l; ++j) {
        for (std::size_t h = j + 1; h < l; ++h) {
          auto why = check_identification(
              chains.m(l), identify(l, i, {j, h}), smaller,
              "identifying x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1) + ",x" +
                  std::to_string(h + 1) + " in " + gm_name(l));
          if (!why.empty()) return fail(why);
        }
      }
    }
  }
  return {};
}

Built xi(const Operation& f, const SymmetricChainPair& chains, const ConstructionOptions& options) {
  if (options.verify_preconditions) {
    auto check = verify_chain_compatibility(chains);
    if (!check.ok) throw ConditionFailure("chains", "chain compatibility", check.failure);
  }
  const PolyRep rep = poly_rep(f);
  const std::size_t n = rep.variable_count;
  const std::size_t l = rep.monomials.size();
  if (l > 1 && l > chains.max_gm_arity()) {
    throw InvalidArgument("xi: needs m_" + std::to_string(l) + " but the chain stops at m_" +
                          std::to_string(chains.max_gm_arity()));
  }

  Inputs inputs;
  std::vector<TermPtr> parts;
  for (const auto& w : rep.monomials) {
    if (w.size() == 1) {
      parts.push_back(proj(n, w.front() - 1));
      continue;
    }
    if (w.size() > chains.max_ts_arity()) {
      throw InvalidArgument("xi: needs s_" + std::to_string(w.size()) +
                            " but the chain stops at s_" + std::to_string(chains.max_ts_arity()));
    }
    std::vector<std::size_t> map;
    for (std::size_t v : w) map.push_back(v - 1);
    inputs.emplace(ts_name(w.size()), chains.s(w.size()));
    parts.push_back(mn(in(ts_name(w.size()), w.size()), n, std::move(map)));
  }
  TermPtr term;
  if (l == 1) {
    term = parts.front();
  } else {
    inputs.emplace(gm_name(l), chains.m(l));
    term = Term::compose(in(gm_name(l), l), std::move(parts));
  }
  if (inputs.empty()) inputs.emplace("s1", make_projection(chains.domain, 1, 1));
  Operation op = evaluate(term, inputs);
  return {std::move(op), std::move(term), std::move(inputs)};
}

}  // namespace clonelab
