#include "properties.hpp"

#include <random>
#include <sstream>
#include <vector>

#include "clonelab/conditions.hpp"
#include "clonelab/io.hpp"
#include "clonelab/ops.hpp"
#include "clonelab/ppcon.hpp"
#include "clonelab/rel.hpp"
#include "clonelab/term.hpp"

namespace clonelab::testing {

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Independent tuple indexing: x_1 is the most significant digit.
std::vector<Elem> digits(std::size_t index, std::size_t k, std::size_t n) {
  std::vector<Elem> out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = static_cast<Elem>(index % k);
    index /= k;
  }
  return out;
}

std::size_t index_of(const std::vector<Elem>& x, std::size_t k) {
  std::size_t idx = 0;
  for (Elem e : x) idx = idx * k + e;
  return idx;
}

Operation random_op(Rng& rng, std::size_t k, std::size_t n) {
  std::vector<std::uint8_t> table(ipow(k, n));
  for (auto& v : table) v = static_cast<std::uint8_t>(uniform(rng, 0, k - 1));
  return Operation(k, n, std::move(table));
}

VarMap random_map(Rng& rng, std::size_t from, std::size_t to) {
  std::vector<std::size_t> m(from);
  for (auto& v : m) v = uniform(rng, 0, to - 1);
  return VarMap(to, std::move(m));
}

std::vector<VarMap> all_maps(std::size_t from, std::size_t to) {
  std::vector<VarMap> out;
  for (std::size_t i = 0; i < ipow(to, from); ++i) {
    std::vector<std::size_t> m(from);
    std::size_t x = i;
    for (std::size_t j = from; j-- > 0;) {
      m[j] = x % to;
      x /= to;
    }
    out.emplace_back(to, std::move(m));
  }
  return out;
}

Relation random_relation(Rng& rng, std::size_t k, std::size_t m, std::size_t max_tuples) {
  std::vector<Tuple> ts;
  const std::size_t count = uniform(rng, 1, max_tuples);
  for (std::size_t i = 0; i < count; ++i) ts.push_back(digits(uniform(rng, 0, ipow(k, m) - 1), k, m));
  return Relation(k, m, std::move(ts));
}

bool preserves_oracle(const Operation& f, const Relation& r) {
  const std::size_t n = f.arity(), m = r.arity();
  const auto& rows = r.tuples();
  const std::size_t choices = ipow(rows.size(), n);
  for (std::size_t c = 0; c < choices; ++c) {
    const auto pick = digits(c, rows.size(), n);
    Tuple image(m);
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Elem> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = rows[pick[i]][j];
      image[j] = f.at(index_of(col, f.domain()));
    }
    if (!r.contains(image)) return false;
  }
  return true;
}

bool is_hom_oracle(const Structure& a, const Structure& b, const std::vector<Elem>& h) {
  for (const auto& [name, rel] : a.relations()) {
    const Relation& target = b.at(name);
    for (const auto& t : rel.tuples()) {
      Tuple img;
      for (Elem e : t) img.push_back(h[e]);
      if (!target.contains(img)) return false;
    }
  }
  return true;
}

bool any_hom_brute(const Structure& a, const Structure& b) {
  const std::size_t total = ipow(b.domain(), a.domain());
  for (std::size_t i = 0; i < total; ++i) {
    if (is_hom_oracle(a, b, digits(i, b.domain(), a.domain()))) return true;
  }
  return false;
}

class Runner {
 public:
  explicit Runner(std::string name) { report_.name = std::move(name); }

  bool fail(const std::string& why) {
    if (report_.ok) {
      report_.ok = false;
      report_.failure = why;
    }
    return false;
  }
  void count() { ++report_.cases; }
  bool ok() const { return report_.ok; }
  PropertyReport done() { return report_; }

 private:
  PropertyReport report_;
};

bool check_minor_law(Runner& run, const Operation& f, const VarMap& s, const VarMap& t) {
  run.count();
  const Operation lhs = minor(minor(f, s), t);
  const std::size_t k = f.domain(), out = t.target_arity;
  for (std::size_t y = 0; y < ipow(k, out); ++y) {
    const auto ys = digits(y, k, out);
    std::vector<Elem> args(f.arity());
    for (std::size_t i = 0; i < f.arity(); ++i) args[i] = ys[t.map[s.map[i]]];
    if (lhs.at(y) != f.at(index_of(args, k))) {
      std::ostringstream o;
      o << "minor law fails for arity " << f.arity() << " over E_" << k << " at index " << y;
      return run.fail(o.str());
    }
  }
  if (lhs != minor(f, s.followed_by(t))) return run.fail("followed_by disagrees with nesting");
  return true;
}

}  // namespace

PropertyReport minor_composition_law(std::uint64_t seed) {
  Runner run("minor composition law");
  Rng rng(seed);
  for (int trial = 0; trial < 3000 && run.ok(); ++trial) {
    const std::size_t k = uniform(rng, 2, 3);
    const std::size_t n = uniform(rng, 1, 3), r = uniform(rng, 1, 3), s = uniform(rng, 1, 3);
    check_minor_law(run, random_op(rng, k, n), random_map(rng, n, r), random_map(rng, r, s));
  }
  for (std::size_t n = 1; n <= 3 && run.ok(); ++n) {
    for (std::size_t code = 0; code < ipow(2, ipow(2, n)) && run.ok(); ++code) {
      std::vector<std::uint8_t> table(ipow(2, n));
      for (std::size_t i = 0; i < table.size(); ++i) table[i] = (code >> i) & 1;
      const Operation f(2, n, table);
      if (minor(f, VarMap::identity(n)) != f) return (run.fail("identity minor changes f"), run.done());
      for (std::size_t r = 1; r <= 3; ++r)
        for (const auto& s : all_maps(n, r))
          for (std::size_t t_to = 1; t_to <= 2; ++t_to)
            for (const auto& t : all_maps(r, t_to))
              if (!check_minor_law(run, f, s, t)) return run.done();
    }
  }
  return run.done();
}

PropertyReport galois_easy_inclusion(std::uint64_t seed) {
  Runner run("Galois easy inclusion");
  Rng rng(seed);
  auto check = [&](std::size_t k, const std::vector<Operation>& gens, const Relation& seed_rel,
                   std::size_t max_arity) {
    const Relation inv = inv_closure(k, gens, seed_rel.tuples(), seed_rel.arity());
    for (const auto& g : gens) {
      if (!preserves_oracle(g, inv)) return run.fail("closure not invariant under a generator");
    }
    CloneOptions o;
    o.max_arity = max_arity;
    o.budget = 20'000;
    const auto clone = generate_clone(k, gens, o);
    for (const auto& f : clone.operations) {
      run.count();
      if (!preserves_oracle(f, inv)) {
        return run.fail("clone member of arity " + std::to_string(f.arity()) +
                        " does not preserve the invariant closure");
      }
    }
    return true;
  };
  for (int trial = 0; trial < 120 && run.ok(); ++trial) {
    const std::size_t k = uniform(rng, 2, 3);
    std::vector<Operation> gens;
    const std::size_t count = uniform(rng, 1, 2);
    for (std::size_t i = 0; i < count; ++i) gens.push_back(random_op(rng, k, uniform(rng, 1, 2)));
    const std::size_t m = uniform(rng, 1, k == 2 ? 3 : 2);
    check(k, gens, random_relation(rng, k, m, 3), k == 2 ? 3 : 1);
  }
  for (std::size_t code = 0; code < 16 && run.ok(); ++code) {
    std::vector<std::uint8_t> table(4);
    for (std::size_t i = 0; i < 4; ++i) table[i] = (code >> i) & 1;
    const std::vector<Operation> gens{Operation(2, 2, table)};
    for (std::size_t m = 1; m <= 2 && run.ok(); ++m) {
      const std::size_t cells = ipow(2, m);
      for (std::size_t subset = 1; subset < ipow(2, cells) && run.ok(); ++subset) {
        std::vector<Tuple> ts;
        for (std::size_t c = 0; c < cells; ++c)
          if ((subset >> c) & 1) ts.push_back(digits(c, 2, m));
        check(2, gens, Relation(2, m, ts), 3);
      }
    }
  }
  return run.done();
}

PropertyReport homomorphism_reverification(std::uint64_t seed) {
  Runner run("homomorphism re-verification");
  Rng rng(seed);
  auto random_structure = [&](std::size_t k, bool unary) {
    Structure s(k);
    s.add("E", random_relation(rng, k, 2, k * k));
    if (unary) s.add("U", random_relation(rng, k, 1, k));
    return s;
  };
  auto check = [&](const Structure& a, const Structure& b, std::optional<std::uint64_t> order) {
    run.count();
    HomSearchOptions o;
    o.seed = order;
    const auto h = find_homomorphism(a, b, o);
    const bool brute = any_hom_brute(a, b);
    if (h.has_value() != brute) return run.fail("search verdict disagrees with brute force");
    if (h && !is_hom_oracle(a, b, h->map)) return run.fail("returned map is not a homomorphism");
    return true;
  };
  for (int trial = 0; trial < 400 && run.ok(); ++trial) {
    const bool unary = uniform(rng, 0, 1) == 1;
    const Structure a = random_structure(uniform(rng, 1, 4), unary);
    const Structure b = random_structure(uniform(rng, 1, 3), unary);
    check(a, b, std::nullopt);
    check(a, b, rng());
  }
  std::vector<Structure> graphs;
  for (std::size_t k = 1; k <= 2; ++k) {
    for (std::size_t code = 0; code < ipow(2, k * k); ++code) {
      std::vector<Tuple> ts;
      for (std::size_t c = 0; c < k * k; ++c)
        if ((code >> c) & 1) ts.push_back(digits(c, k, 2));
      Structure s(k);
      s.add("E", Relation(k, 2, ts));
      graphs.push_back(std::move(s));
    }
  }
  for (const auto& a : graphs)
    for (const auto& b : graphs)
      if (!check(a, b, std::nullopt)) return run.done();
  return run.done();
}

PropertyReport json_round_trip(std::uint64_t seed) {
  Runner run("JSON round trip");
  Rng rng(seed);

  auto stable = [&](const Json& j, const auto& reparse) {
    run.count();
    const std::string first = dump(j);
    const Json parsed = Json::parse(first);
    if (dump(parsed) != first) return run.fail("parse/serialize changes bytes: " + first);
    if (dump(reparse(parsed)) != first) return run.fail("value round trip changes bytes: " + first);
    return true;
  };
  auto op_back = [](const Json& j) { return to_json(operation_from_json(j)); };
  auto map_back = [](const Json& j) { return to_json(varmap_from_json(j)); };
  auto rel_back = [](const Json& j) { return to_json(relation_from_json(j)); };
  auto str_back = [](const Json& j) { return to_json(structure_from_json(j)); };
  auto cond_back = [](const Json& j) { return to_json(condition_from_json(j)); };
  auto pp_back = [](const Json& j) { return to_json(ppformula_from_json(j)); };
  auto term_back = [](const Json& j) { return to_json(term_from_json(j)); };
  auto hom_back = [](const Json& j) { return to_json(homomorphism_from_json(j)); };

  auto random_term = [&](std::size_t k) {
    const std::size_t r = uniform(rng, 1, 3);
    const std::size_t n = uniform(rng, 1, 3);
    TermPtr head = Term::input("f", n);
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < n; ++i) {
      if (uniform(rng, 0, 1)) {
        args.push_back(Term::projection(r, uniform(rng, 0, r - 1)));
      } else {
        const std::size_t m = uniform(rng, 1, 3);
        args.push_back(Term::minor(Term::input("g", m), random_map(rng, m, r)));
      }
    }
    (void)k;
    return Term::compose(head, args);
  };

  for (int trial = 0; trial < 500 && run.ok(); ++trial) {
    const std::size_t k = uniform(rng, 1, 3);
    const std::size_t n = uniform(rng, 1, 3);
    const Operation f = random_op(rng, k, n);
    if (operation_from_json(to_json(f)) != f) return (run.fail("operation value changed"), run.done());
    stable(to_json(f), op_back);
    const VarMap s = random_map(rng, n, uniform(rng, 1, 3));
    if (varmap_from_json(to_json(s)) != s) return (run.fail("varmap value changed"), run.done());
    stable(to_json(s), map_back);
    const Relation r = random_relation(rng, k, uniform(rng, 1, 3), 5);
    if (relation_from_json(to_json(r)) != r) return (run.fail("relation value changed"), run.done());
    stable(to_json(r), rel_back);
    Structure st(k);
    st.add("R", r);
    st.add("c0", Relation(k, 1, {{0}}));
    if (structure_from_json(to_json(st)) != st) return (run.fail("structure value changed"), run.done());
    stable(to_json(st), str_back);
    Homomorphism h;
    for (std::size_t i = 0; i < k + 1; ++i) h.map.push_back(static_cast<Elem>(uniform(rng, 0, k - 1)));
    stable(to_json(h), hom_back);

    PPFormula phi;
    phi.free = uniform(rng, 1, 3);
    phi.exists = uniform(rng, 0, 2);
    const std::size_t vars = phi.free + phi.exists;
    for (std::size_t a = 0; a < uniform(rng, 0, 3); ++a) {
      std::vector<std::size_t> v(r.arity());
      for (auto& x : v) x = uniform(rng, 0, vars - 1);
      phi.atoms.emplace_back("R", v);
    }
    if (uniform(rng, 0, 1)) phi.eq.emplace_back(uniform(rng, 0, vars - 1), uniform(rng, 0, vars - 1));
    if (ppformula_from_json(to_json(phi)) != phi) return (run.fail("ppformula value changed"), run.done());
    stable(to_json(phi), pp_back);

    stable(to_json(random_term(k)), term_back);

    std::vector<MinorIdentity> ids;
    const std::size_t fa = uniform(rng, 1, 3), ga = uniform(rng, 1, 3);
    for (std::size_t i = 0; i < uniform(rng, 1, 3); ++i) {
      const std::size_t vars_r = uniform(rng, 1, 3);
      ids.push_back({"f", random_map(rng, fa, vars_r), "g", random_map(rng, ga, vars_r)});
    }
    const MinorCondition c("random", {{"f", fa}, {"g", ga}}, ids);
    if (condition_from_json(to_json(c)) != c) return (run.fail("condition value changed"), run.done());
    stable(to_json(c), cond_back);
  }

  for (std::size_t n = 1; n <= 2 && run.ok(); ++n)
    for (std::size_t code = 0; code < ipow(2, ipow(2, n)); ++code) {
      std::vector<std::uint8_t> table(ipow(2, n));
      for (std::size_t i = 0; i < table.size(); ++i) table[i] = (code >> i) & 1;
      if (!stable(to_json(Operation(2, n, table)), op_back)) break;
    }
  for (std::size_t from = 1; from <= 3 && run.ok(); ++from)
    for (std::size_t to = 1; to <= 3; ++to)
      for (const auto& m : all_maps(from, to))
        if (!stable(to_json(m), map_back)) break;
  for (std::size_t m = 1; m <= 2 && run.ok(); ++m) {
    const std::size_t cells = ipow(2, m);
    for (std::size_t subset = 0; subset < ipow(2, cells); ++subset) {
      std::vector<Tuple> ts;
      for (std::size_t c = 0; c < cells; ++c)
        if ((subset >> c) & 1) ts.push_back(digits(c, 2, m));
      if (!stable(to_json(Relation(2, m, ts)), rel_back)) break;
    }
  }
  const std::vector<MinorCondition> builtins{
      conditions::sigma_p(2), conditions::sigma_p(3), conditions::quasi_minority(),
      conditions::quasi_malcev(), conditions::quasi_majority(), conditions::fs(3),
      conditions::ts(3), conditions::gm(3), conditions::wnu(3), conditions::qnu(3)};
  for (const auto& c : builtins) {
    if (condition_from_json(to_json(c)) != c) return (run.fail("builtin condition changed"), run.done());
    stable(to_json(c), cond_back);
  }
  return run.done();
}

}  // namespace clonelab::testing
