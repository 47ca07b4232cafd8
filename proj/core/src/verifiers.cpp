#include "clonelab/verifiers.hpp"

#include <chrono>
#include <functional>
#include <set>

#include "clonelab/fixtures.hpp"
#include "clonelab/ppcon.hpp"

namespace clonelab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::unknown:
      return "unknown";
  }
  return "unknown";
}

Json to_json(const VerifierResult& r) {
  return Json{{"name", r.name},
              {"verdict", to_string(r.verdict)},
              {"details", r.details},
              {"elapsed_seconds", r.elapsed_seconds}};
}

E3Pipeline build_e3_pipeline() {
  const Operation d = catalog::affine3();
  const Operation dd = catalog::dual_discriminator(3);
  const Operation c2 = catalog::minimum(3);
  const Operation c3 = catalog::symmetric_majority(0);
  Built minority = minority_from_malcev_majority(d, dd);
  Built majority = symmetrize_majority(dd, c2, c3);
  Built symmetric = symmetrize_minority(minority.operation, c2, c3);
  const Elem c = constant_of_symmetric(symmetric.operation);
  Built dswitch = d_switch(symmetric.operation);
  return {d,  dd, c2, c3, std::move(minority), std::move(majority), std::move(symmetric),
          c, std::move(dswitch)};
}

SymmetricChainPair build_e3_chains(const E3Pipeline& pipeline, std::size_t max_ts,
                                   std::size_t max_gm) {
  SymmetricChainPair chains;
  chains.domain = 3;
  for (auto& b : totally_symmetric_chain(pipeline.symmetric_minority.operation,
                                         pipeline.majority.operation, pipeline.c2, max_ts)) {
    chains.ts_chain.push_back(std::move(b.operation));
  }
  for (auto& b : generalized_minority_chain(pipeline.symmetric_minority.operation, max_gm)) {
    chains.gm_chain.push_back(std::move(b.operation));
  }
  return chains;
}

namespace {

constexpr std::uint64_t default_scan_budget = 10'000'000;
constexpr std::uint64_t default_table_budget = 1'000'000;

using Body = std::function<void(const VerifyParams&, VerifierResult&)>;

void set(VerifierResult& r, bool ok) { r.verdict = ok ? Verdict::pass : Verdict::fail; }

const Structure& structure_or(const VerifyParams& params, const Structure& fallback) {
  return params.structure ? *params.structure : fallback;
}

void remark_cycles(const VerifyParams& params, VerifierResult& r) {
  const std::uint64_t budget = params.budget.value_or(default_scan_budget);
  const Structure cp = fixtures::cycle(params.p);
  const auto search =
      find_witness(cp, Symmetry::cyclic, conditions::sigma_p(params.p), budget);
  r.details["p"] = params.p;
  r.details["candidates_scanned"] = search.candidates_scanned;
  r.details["candidate_space"] = OperationSpace(params.p, params.p, Symmetry::cyclic).size();
  if (search.witness) {
    r.verdict = Verdict::fail;
    r.details["counterexample"] = to_json(*search.witness);
  } else if (search.definitive) {
    r.verdict = Verdict::pass;
  } else {
    r.verdict = Verdict::unknown;
    r.details["budget"] = budget;
  }
}

void star_identities(const VerifyParams&, VerifierResult& r) {
  const auto pipeline = build_e3_pipeline();
  const Operation& m3 = pipeline.symmetric_minority.operation;
  // Built unchecked so that failures are reported here with their valuation.
  const Operation m5 = generalized_minority(m3, 5, {false}).operation;
  r.details["constant"] = pipeline.constant;
  r.details["m5"] = to_json(m5);
  if (auto v = find_violation({{"f", m5}}, conditions::gm(5))) {
    r.verdict = Verdict::fail;
    r.details["counterexample"] = to_json(*v, conditions::gm(5));
    return;
  }
  if (auto v = star_one_violation(m5, m3)) {
    r.verdict = Verdict::fail;
    r.details["counterexample"] = Json{{"identity", "m5(x1,x,x,x4,x5) = m3(x1,x4,x5)"},
                                       {"valuation", *v}};
    return;
  }
  if (auto v = star_two_violation(m5)) {
    r.verdict = Verdict::fail;
    r.details["counterexample"] = Json{{"identity", "m5(x1,x2,x3,x1,x2) = x3"}, {"valuation", *v}};
    return;
  }
  r.details["gm5_valuations"] = 243;
  r.details["star_one_valuations"] = 81;
  r.details["star_two_valuations"] = 27;
  r.verdict = Verdict::pass;
}

void ts_properties(const VerifyParams& params, VerifierResult& r) {
  if (params.max_ts < 2 || params.max_ts > 9) throw InvalidArgument("ts-properties needs 2 <= N <= 9");
  const auto pipeline = build_e3_pipeline();
  const Elem c = constant_of_symmetric(pipeline.majority.operation);
  r.details["N"] = params.max_ts;
  r.details["majority_constant"] = c;
  r.details["minority_constant"] = pipeline.constant;
  const auto chain = totally_symmetric_chain(pipeline.symmetric_minority.operation,
                                             pipeline.majority.operation, pipeline.c2,
                                             params.max_ts, {false});
  Json checked = Json::array();
  for (const auto& b : chain) {
    const std::size_t n = b.operation.arity();
    if (auto v = find_violation({{"f", b.operation}}, conditions::ts(n))) {
      r.verdict = Verdict::fail;
      r.details["counterexample"] = to_json(*v, conditions::ts(n));
      return;
    }
    if (auto why = ts_property_violation(b.operation, pipeline.c2,
                                         pipeline.symmetric_minority.operation, c)) {
      r.verdict = Verdict::fail;
      r.details["counterexample"] = Json{{"arity", n}, {"failure", *why}};
      return;
    }
    checked.push_back(Json{{"arity", n}, {"tuples", b.operation.size()}});
  }
  r.details["checked"] = std::move(checked);
  r.verdict = Verdict::pass;
}

void xi_homomorphism(const VerifyParams&, VerifierResult& r) {
  const auto pipeline = build_e3_pipeline();
  const auto chains = build_e3_chains(pipeline, 3, 7);
  const auto compat = verify_chain_compatibility(chains);
  r.details["chains_compatible"] = compat.ok;
  if (!compat.ok) {
    r.verdict = Verdict::fail;
    r.details["counterexample"] = compat.failure;
    return;
  }
  std::uint64_t operations = 0, pairs = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto idempotent =
        enumerate_operations(2, n, Symmetry::none, [](const Operation& f) { return is_idempotent(f); });
    for (const auto& f : idempotent) {
      ++operations;
      const Operation image = xi(f, chains, {false}).operation;
      for (std::size_t target = 1; target <= 3; ++target) {
        const std::uint64_t count = checked_pow(target, n, UINT64_MAX);
        Tuple digits(n);
        for (std::uint64_t s = 0; s < count; ++s) {
          decode_index(s, target, digits);
          const VarMap sigma(target, std::vector<std::size_t>(digits.begin(), digits.end()));
          ++pairs;
          if (xi(minor(f, sigma), chains, {false}).operation != minor(image, sigma)) {
            r.verdict = Verdict::fail;
            r.details["counterexample"] = Json{{"f", to_json(f)}, {"sigma", to_json(sigma)}};
            return;
          }
        }
      }
    }
  }
  r.details["operations"] = operations;
  r.details["operation_map_pairs"] = pairs;
  r.verdict = Verdict::pass;
}

void splitting_malcev(const VerifyParams& params, VerifierResult& r) {
  const std::uint64_t budget = params.budget.value_or(default_scan_budget);
  const Structure fallback = fixtures::b2();
  const Structure& a = structure_or(params, fallback);
  const Structure b = expand_by_singletons(core_of(a).structure);
  r.details["core_size"] = b.domain();

  const auto search = find_witness(b, Symmetry::none, conditions::quasi_malcev(), budget);
  r.details["candidates_scanned"] = search.candidates_scanned;
  if (!search.definitive) {
    r.verdict = Verdict::unknown;
    r.details["budget"] = budget;
    return;
  }
  std::vector<Operation> pol3;
  try {
    pol3 = pol(b, 3, {Symmetry::none, budget});
  } catch (const CapExceeded&) {
    r.verdict = Verdict::unknown;
    r.details["budget"] = budget;
    return;
  }
  const bool malcev = search.witness.has_value();
  const auto report = free_structure_malcev(b, pol3, true);
  r.details["malcev"] = malcev;
  r.details["polymorphisms"] = pol3.size();
  r.details["free_structure_size"] = report.constructed.domain();
  r.details["report"] = to_json(report);
  if (!malcev) {
    set(r, report.hom_equivalent());
    if (r.verdict == Verdict::fail) r.details["counterexample"] = "free structure not equivalent to B2";
  } else {
    set(r, report.condition_witness.has_value() && !report.to_target);
    if (r.verdict == Verdict::fail) {
      r.details["counterexample"] = "Mal'cev polymorphism present but (pr2,pr2) not in R";
    }
  }
}

void splitting_cycles(const VerifyParams& params, VerifierResult& r) {
  const std::uint64_t budget = params.budget.value_or(default_scan_budget);
  const Structure fallback = fixtures::cycle(2);
  const Structure& a = structure_or(params, fallback);
  const std::size_t p = params.p;
  r.details["p"] = p;

  const auto search = find_witness(a, Symmetry::cyclic, conditions::sigma_p(p), budget);
  r.details["candidates_scanned"] = search.candidates_scanned;
  if (!search.definitive) {
    r.verdict = Verdict::unknown;
    r.details["budget"] = budget;
    return;
  }
  std::vector<Operation> polp;
  try {
    polp = pol(a, p, {Symmetry::none, budget});
  } catch (const CapExceeded&) {
    r.verdict = Verdict::unknown;
    r.details["budget"] = budget;
    return;
  }
  const bool cyclic = search.witness.has_value();
  const auto report = free_structure_cycle(a, p, polp, true);
  std::set<Elem> seen;
  bool disjoint = true;
  for (const auto& c : report.classes) {
    for (Elem id : c) disjoint = seen.insert(id).second && disjoint;
  }
  r.details["cyclic"] = cyclic;
  r.details["polymorphisms"] = polp.size();
  r.details["classes_disjoint"] = disjoint;
  r.details["free_structure_size"] = report.constructed.domain();
  r.details["report"] = to_json(report);
  if (!cyclic) {
    set(r, disjoint && report.hom_equivalent() &&
               report.classes.front().size() * p == polp.size());
    if (r.verdict == Verdict::fail) r.details["counterexample"] = "classes or homomorphisms fail";
  } else {
    set(r, report.condition_witness.has_value() && !disjoint);
    if (r.verdict == Verdict::fail) {
      r.details["counterexample"] = "cyclic polymorphism present but classes are disjoint";
    }
  }
}

void collapse_idemp(const VerifyParams& params, VerifierResult& r) {
  const std::size_t n = params.n;
  if (n < 2 || n > 8) throw InvalidArgument("collapse-idemp needs 2 <= n <= 8");
  const Structure i2 = fixtures::idempotent(2);
  const Structure in = fixtures::idempotent(n);
  std::vector<std::pair<std::string, PPFormula>> defs;
  for (std::size_t i = 0; i < n; ++i) {
    PPFormula phi{n, 0, {}, {}};
    for (std::size_t j = 0; j < n; ++j) phi.atoms.push_back({j == i ? "c1" : "c0", {j}});
    defs.emplace_back("c" + std::to_string(i), std::move(phi));
  }
  const Structure s = pp_power(i2, n, defs);
  // e_i has a 1 in coordinate i; coordinate 0 is the most significant digit.
  Homomorphism g, h{std::vector<Elem>(s.domain(), 0)};
  for (std::size_t i = 0; i < n; ++i) {
    const Elem e = static_cast<Elem>(1u << (n - 1 - i));
    g.map.push_back(e);
    h.map[e] = static_cast<Elem>(i);
  }
  const bool g_ok = is_homomorphism(in, s, g);
  const bool h_ok = is_homomorphism(s, in, h);
  const auto searched = hom_equivalent(in, s);
  r.details["n"] = n;
  r.details["structure"] = to_json(s);
  r.details["g"] = to_json(g);
  r.details["h"] = to_json(h);
  r.details["g_verified"] = g_ok;
  r.details["h_verified"] = h_ok;
  r.details["search_agrees"] = searched.equivalent();
  set(r, g_ok && h_ok && searched.equivalent());
  if (r.verdict == Verdict::fail) r.details["counterexample"] = "a homomorphism fails";
}

void dichotomy(const VerifyParams& params, VerifierResult& r) {
  const Structure fallback = fixtures::b2();
  const Structure& a = structure_or(params, fallback);
  const auto d = verify_dichotomy_c1_i2(a);
  r.details = to_json(d);
  const bool branch_matches = (d.branch == Dichotomy::Branch::c1_constructs_a) ==
                              (d.core.structure.domain() == 1);
  set(r, d.verified() && branch_matches);
  if (r.verdict == Verdict::fail) {
    r.details["counterexample"] = "witness homomorphisms do not both verify";
  }
}

void baker_pixley_sample(const VerifyParams&, VerifierResult& r) {
  const Operation dd = catalog::dual_discriminator(3);
  const std::size_t k = 3, arity = 3;
  std::vector<Tuple> all;
  Tuple t(arity);
  for (std::uint64_t i = 0; i < 27; ++i) {
    decode_index(i, k, t);
    all.push_back(t);
  }
  const std::vector<Operation> gens{dd};
  std::set<std::vector<Tuple>> distinct;
  std::uint64_t seeds = 0, grown = 0;
  auto check = [&](const std::vector<Tuple>& seed) {
    ++seeds;
    const Relation rel = inv_closure(k, gens, seed, arity);
    if (rel.size() > seed.size()) ++grown;
    if (!is_n_decomposable(rel, 2)) {
      r.verdict = Verdict::fail;
      r.details["counterexample"] = to_json(rel);
      return false;
    }
    distinct.insert(rel.tuples());
    return true;
  };
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!check({all[i]})) return;
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (!check({all[i], all[j]})) return;
      for (std::size_t l = j + 1; l < all.size(); ++l) {
        if (!check({all[i], all[j], all[l]})) return;
      }
    }
  }
  r.details["seeds"] = seeds;
  r.details["closures_larger_than_seed"] = grown;
  r.details["distinct_relations"] = distinct.size();
  r.verdict = Verdict::pass;
}

void block_structure(const VerifyParams&, VerifierResult& r) {
  Json checks = Json::object();
  const Relation swap(2, 2, {{0, 1}, {1, 0}});
  checks["ess_swap"] = essential_tuples(swap) == std::vector<Tuple>{{0, 0}, {1, 1}};

  std::vector<Tuple> even;
  for (Elem x = 0; x < 2; ++x)
    for (Elem y = 0; y < 2; ++y) even.push_back({x, y, static_cast<Elem>(x ^ y)});
  const Relation parity(2, 3, even);
  checks["parity_essential"] = is_essential(parity);
  const auto bs = blocks(parity);
  const bool single = bs.size() == 1 && !bs.front().is_trivial && bs.front().product_factors &&
                      *bs.front().product_factors ==
                          std::vector<std::vector<Elem>>(3, std::vector<Elem>{0, 1});
  checks["single_product_block"] = single;
  bool group_ok = false;
  if (single) {
    if (auto g = block_group_structure(parity, bs.front())) {
      group_ok = g->group.name == "Z2";
      for (const auto& phi : g->phi) group_ok = group_ok && phi == std::map<Elem, Elem>{{0, 0}, {1, 1}};
      r.details["group"] = to_json(*g);
    }
  }
  checks["group_z2_identity"] = group_ok;
  const std::vector<Operation> gens{catalog::xor2()};
  checks["critical"] = is_critical(parity, gens, {true, default_table_budget}) == Criticality::critical;
  checks["not_2_decomposable"] = !is_n_decomposable(parity, 2);

  bool ok = true;
  Json failing = Json::array();
  for (const auto& [name, value] : checks.items()) {
    if (!value.get<bool>()) {
      ok = false;
      failing.push_back(name);
    }
  }
  r.details["checks"] = checks;
  if (!ok) r.details["counterexample"] = failing;
  set(r, ok);
}

void majority_search(const VerifyParams& params, VerifierResult& r) {
  const std::uint64_t budget = params.budget.value_or(default_table_budget);
  std::vector<Operation> gens = params.generators;
  if (gens.empty()) gens = {catalog::affine3(), catalog::minimum(3), catalog::symmetric_majority(0)};
  const std::size_t k = gens.front().domain();
  const auto qm = conditions::quasi_majority();
  CloneOptions options;
  options.min_arity = 3;
  options.max_arity = 3;
  options.budget = budget;
  options.stop_when = [&](const Operation& f) {
    return f.arity() == 3 && is_idempotent(f) && satisfies(f, qm);
  };
  const auto clone = generate_clone(k, gens, options);
  r.details["generated"] = clone.operations.size();
  if (clone.stopped_at) {
    r.verdict = Verdict::pass;
    r.details["majority"] = to_json(*clone.stopped_at);
  } else if (clone.fixed_point) {
    r.verdict = Verdict::fail;
    r.details["counterexample"] = "arity-3 part of the generated clone has no majority";
  } else {
    r.verdict = Verdict::unknown;
    r.details["budget"] = budget;
  }
}

const std::vector<std::pair<std::string, Body>>& registry() {
  static const std::vector<std::pair<std::string, Body>> all{
      {"remark-cycles", remark_cycles},
      {"star-identities", star_identities},
      {"ts-properties", ts_properties},
      {"xi-homomorphism", xi_homomorphism},
      {"splitting-malcev", splitting_malcev},
      {"splitting-cycles", splitting_cycles},
      {"collapse-idemp", collapse_idemp},
      {"dichotomy", dichotomy},
      {"baker-pixley-sample", baker_pixley_sample},
      {"block-structure", block_structure},
      {"majority-search", majority_search},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& verifier_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, body] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

VerifierResult verify(const std::string& name, const VerifyParams& params) {
  for (const auto& [id, body] : registry()) {
    if (id != name) continue;
    VerifierResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(params, result);
    } catch (const ConditionFailure& e) {
      result.verdict = Verdict::fail;
      result.details["counterexample"] = e.what();
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
  throw InvalidArgument("unknown verifier '" + name + "'");
}

}  // namespace clonelab
