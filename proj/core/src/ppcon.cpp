#include "clonelab/ppcon.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "clonelab/fixtures.hpp"

namespace clonelab {

void require_same_signature(const Structure& a, const Structure& b) {
  auto signature = [](const Structure& s) {
    std::map<std::string, std::size_t> sig;
    for (const auto& [name, r] : s.relations()) sig.emplace(name, r.arity());
    return sig;
  };
  if (signature(a) != signature(b)) {
    throw InvalidArgument("structures have different signatures");
  }
}

std::optional<std::pair<std::string, Tuple>> homomorphism_violation(const Structure& a,
                                                                    const Structure& b,
                                                                    const Homomorphism& h) {
  require_same_signature(a, b);
  if (h.map.size() != a.domain()) throw InvalidArgument("homomorphism map has the wrong size");
  for (Elem v : h.map) {
    if (v >= b.domain()) throw InvalidArgument("homomorphism image out of range");
  }
  Tuple image;
  for (const auto& [name, r] : a.relations()) {
    const Relation& target = b.at(name);
    for (const auto& t : r.tuples()) {
      image.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = h.map[t[i]];
      if (!target.contains(image)) return std::make_pair(name, t);
    }
  }
  return std::nullopt;
}

bool is_homomorphism(const Structure& a, const Structure& b, const Homomorphism& h) {
  return !homomorphism_violation(a, b, h);
}

namespace {

class HomSearch {
 public:
  HomSearch(const Structure& a, const Structure& b, const HomSearchOptions& options)
      : n_(a.domain()), m_(b.domain()), var_constraints_(a.domain()) {
    for (const auto& [name, r] : a.relations()) {
      const Relation* target = &b.at(name);
      for (const auto& t : r.tuples()) {
        for (Elem v : t) var_constraints_[v].push_back(constraints_.size());
        constraints_.push_back({target, t});
      }
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), Elem{0});
    std::stable_sort(order_.begin(), order_.end(), [&](Elem x, Elem y) {
      return var_constraints_[x].size() > var_constraints_[y].size();
    });
    values_.resize(m_);
    std::iota(values_.begin(), values_.end(), Elem{0});
    if (options.seed) {
      std::mt19937_64 rng(*options.seed);
      std::shuffle(values_.begin(), values_.end(), rng);
    }
  }

  std::optional<Homomorphism> run() {
    Domains dom(n_, std::vector<char>(m_, 1));
    std::deque<std::size_t> queue(constraints_.size());
    std::iota(queue.begin(), queue.end(), std::size_t{0});
    if (!propagate(dom, queue)) return std::nullopt;
    return search(dom);
  }

 private:
  using Domains = std::vector<std::vector<char>>;
  struct Constraint {
    const Relation* target;
    Tuple vars;
  };

  // Generalized arc consistency: every remaining value of every variable in a
  // constraint extends to a target tuple consistent with the other domains.
  bool revise(const Constraint& c, Domains& dom, std::vector<Elem>& changed) {
    const std::size_t arity = c.vars.size();
    std::vector<std::vector<char>> supported(arity, std::vector<char>(m_, 0));
    for (const auto& s : c.target->tuples()) {
      bool ok = true;
      for (std::size_t j = 0; j < arity && ok; ++j) {
        if (!dom[c.vars[j]][s[j]]) ok = false;
        for (std::size_t i = 0; i < j && ok; ++i) {
          if (c.vars[i] == c.vars[j] && s[i] != s[j]) ok = false;
        }
      }
      if (!ok) continue;
      for (std::size_t j = 0; j < arity; ++j) supported[j][s[j]] = 1;
    }
    for (std::size_t j = 0; j < arity; ++j) {
      auto& d = dom[c.vars[j]];
      bool any = false, removed = false;
      for (std::size_t v = 0; v < m_; ++v) {
        if (d[v] && !supported[j][v]) {
          d[v] = 0;
          removed = true;
        }
        any = any || d[v];
      }
      if (!any) return false;
      if (removed) changed.push_back(c.vars[j]);
    }
    return true;
  }

  bool propagate(Domains& dom, std::deque<std::size_t>& queue) {
    std::vector<char> queued(constraints_.size(), 0);
    for (std::size_t c : queue) queued[c] = 1;
    std::vector<Elem> changed;
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      queued[c] = 0;
      changed.clear();
      if (!revise(constraints_[c], dom, changed)) return false;
      for (Elem v : changed) {
        for (std::size_t d : var_constraints_[v]) {
          if (!queued[d]) {
            queued[d] = 1;
            queue.push_back(d);
          }
        }
      }
    }
    return true;
  }

  std::optional<Homomorphism> search(Domains& dom) {
    std::optional<Elem> branch;
    for (Elem v : order_) {
      if (std::count(dom[v].begin(), dom[v].end(), 1) > 1) {
        branch = v;
        break;
      }
    }
    if (!branch) {
      Homomorphism h;
      h.map.resize(n_);
      for (std::size_t v = 0; v < n_; ++v) {
        h.map[v] = static_cast<Elem>(std::find(dom[v].begin(), dom[v].end(), 1) - dom[v].begin());
      }
      return h;
    }
    for (Elem value : values_) {
      if (!dom[*branch][value]) continue;
      Domains next = dom;
      std::fill(next[*branch].begin(), next[*branch].end(), 0);
      next[*branch][value] = 1;
      std::deque<std::size_t> queue(var_constraints_[*branch].begin(),
                                    var_constraints_[*branch].end());
      if (!propagate(next, queue)) continue;
      if (auto h = search(next)) return h;
    }
    return std::nullopt;
  }

  std::size_t n_;
  std::size_t m_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> var_constraints_;
  std::vector<Elem> order_;
  std::vector<Elem> values_;
};

}  // namespace

std::optional<Homomorphism> find_homomorphism(const Structure& a, const Structure& b,
                                              const HomSearchOptions& options) {
  require_same_signature(a, b);
  auto h = HomSearch(a, b, options).run();
  if (h && !is_homomorphism(a, b, *h)) {
    throw Error("homomorphism search returned a map that fails verification");
  }
  return h;
}

HomEquivalence hom_equivalent(const Structure& a, const Structure& b,
                              const HomSearchOptions& options) {
  return {find_homomorphism(a, b, options), find_homomorphism(b, a, options)};
}

Core core_of(const Structure& a) {
  std::vector<Elem> kept(a.domain());
  std::iota(kept.begin(), kept.end(), Elem{0});
  // r maps every original element to an original element inside `kept`.
  std::vector<Elem> r = kept;

  bool shrunk = true;
  while (shrunk && kept.size() > 1) {
    shrunk = false;
    const Structure current = a.induced(kept);
    for (std::size_t drop = kept.size(); drop-- > 0;) {
      std::vector<Elem> rest = kept;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(drop));
      auto h = find_homomorphism(current, a.induced(rest));
      if (!h) continue;
      for (Elem& x : r) {
        const auto pos = std::lower_bound(kept.begin(), kept.end(), x) - kept.begin();
        x = rest[h->map[static_cast<std::size_t>(pos)]];
      }
      kept = std::move(rest);
      shrunk = true;
      break;
    }
  }

  Core core{a.induced(kept), kept, {}};
  auto label = [&](Elem x) {
    return static_cast<Elem>(std::lower_bound(kept.begin(), kept.end(), x) - kept.begin());
  };
  // r restricted to the core is an automorphism; undo it so r fixes the core.
  std::vector<Elem> inverse(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) inverse[label(r[kept[i]])] = static_cast<Elem>(i);
  core.retraction.map.resize(a.domain());
  for (std::size_t x = 0; x < a.domain(); ++x) core.retraction.map[x] = inverse[label(r[x])];
  if (!is_homomorphism(a, core.structure, core.retraction)) {
    throw Error("core retraction fails verification");
  }
  return core;
}

std::string singleton_name(Elem a) { return "const" + std::to_string(a); }

Structure expand_by_singletons(const Structure& c) {
  Structure out = c;
  for (Elem a = 0; a < c.domain(); ++a) {
    std::string name = singleton_name(a);
    while (out.find(name)) name += "'";
    out.add(name, Relation(c.domain(), 1, {{a}}));
  }
  return out;
}

void validate(const PPFormula& phi, const Structure& a) {
  const std::size_t vars = phi.free + phi.exists;
  if (phi.free < 1) throw InvalidArgument("pp formula needs at least one free variable");
  for (const auto& [name, args] : phi.atoms) {
    const Relation& r = a.at(name);
    if (args.size() != r.arity()) {
      throw InvalidArgument("pp atom '" + name + "' has the wrong number of arguments");
    }
    for (std::size_t v : args) {
      if (v >= vars) throw InvalidArgument("pp atom variable out of range");
    }
  }
  for (const auto& [x, y] : phi.eq) {
    if (x >= vars || y >= vars) throw InvalidArgument("pp equality variable out of range");
  }
}

Relation evaluate(const PPFormula& phi, const Structure& a, std::uint64_t cap) {
  validate(phi, a);
  const std::size_t k = a.domain();
  const std::size_t vars = phi.free + phi.exists;
  checked_pow(k, vars, cap);
  const std::uint64_t free_count = checked_pow(k, phi.free, cap);
  const std::uint64_t exists_count = checked_pow(k, phi.exists, cap);

  std::vector<const Relation*> rels;
  for (const auto& atom : phi.atoms) rels.push_back(&a.at(atom.first));

  Tuple value(vars), head(phi.free), tail(phi.exists), args;
  auto holds = [&] {
    for (const auto& [x, y] : phi.eq) {
      if (value[x] != value[y]) return false;
    }
    for (std::size_t i = 0; i < phi.atoms.size(); ++i) {
      const auto& idx = phi.atoms[i].second;
      args.resize(idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) args[j] = value[idx[j]];
      if (!rels[i]->contains(args)) return false;
    }
    return true;
  };

  std::vector<Tuple> out;
  for (std::uint64_t f = 0; f < free_count; ++f) {
    decode_index(f, k, head);
    std::copy(head.begin(), head.end(), value.begin());
    for (std::uint64_t e = 0; e < exists_count; ++e) {
      decode_index(e, k, tail);
      std::copy(tail.begin(), tail.end(), value.begin() + static_cast<std::ptrdiff_t>(phi.free));
      if (holds()) {
        out.push_back(head);
        break;
      }
    }
  }
  return Relation(k, phi.free, std::move(out));
}

Structure pp_power(const Structure& a, std::size_t n,
                   const std::vector<std::pair<std::string, PPFormula>>& defs,
                   std::uint64_t cap) {
  if (n < 1) throw InvalidArgument("pp power needs n >= 1");
  const std::size_t k = a.domain();
  const std::size_t domain = checked_pow(k, n, std::min<std::uint64_t>(cap, 1u << 24));
  Structure out(domain);
  for (const auto& [name, phi] : defs) {
    if (phi.free % n != 0) {
      throw InvalidArgument("formula '" + name + "' has a free variable count not divisible by n");
    }
    const std::size_t arity = phi.free / n;
    Relation flat = evaluate(phi, a, cap);
    std::vector<Tuple> tuples;
    tuples.reserve(flat.size());
    for (const auto& t : flat.tuples()) {
      Tuple u(arity);
      for (std::size_t j = 0; j < arity; ++j) {
        u[j] = static_cast<Elem>(encode_index(t.data() + j * n, n, k));
      }
      tuples.push_back(std::move(u));
    }
    out.add(name, Relation(domain, arity, std::move(tuples)));
  }
  return out;
}

Elem operation_id(const Operation& f) {
  const std::size_t k = f.domain();
  std::uint64_t id = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    id = id * k + f.at(i);
    if (id > 0xffffffffu) throw CapExceeded("operation id does not fit in an element");
  }
  return static_cast<Elem>(id);
}

Operation operation_of_id(std::size_t k, std::size_t n, Elem id) {
  const std::size_t size = checked_pow(k, n, 1u << 24);
  std::vector<std::uint8_t> table(size);
  std::uint64_t rest = id;
  for (std::size_t i = size; i-- > 0;) {
    table[i] = static_cast<std::uint8_t>(rest % k);
    rest /= k;
  }
  if (rest != 0) throw InvalidArgument("operation id out of range");
  return Operation(k, n, std::move(table));
}

namespace {

constexpr std::uint64_t free_domain_cap = 1u << 16;

void require_polymorphisms(const Structure& a, const std::vector<Operation>& ops,
                           std::size_t arity) {
  for (const auto& f : ops) {
    if (f.domain() != a.domain() || f.arity() != arity) {
      throw InvalidArgument("supplied operation has the wrong domain or arity");
    }
    if (!is_polymorphism(f, a)) throw InvalidArgument("supplied operation is not a polymorphism");
  }
}

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

FreeStructureReport free_structure_malcev(const Structure& a, const std::vector<Operation>& pol3,
                                          bool complete) {
  const std::size_t k = a.domain();
  const std::size_t size = checked_pow(k, checked_pow(k, 2, 64), free_domain_cap);
  require_polymorphisms(a, pol3, 3);

  const Operation pr1 = make_projection(k, 2, 1);
  const Operation pr2 = make_projection(k, 2, 2);
  const VarMap xxy(2, {0, 0, 1}), yxx(2, {1, 0, 0});

  FreeStructureReport report;
  report.polymorphisms_complete = complete;
  std::vector<Tuple> pairs;
  for (const auto& w : pol3) {
    const Operation f = minor(w, xxy), g = minor(w, yxx);
    if (f == pr2 && g == pr2 && !report.condition_witness) report.condition_witness = w;
    pairs.push_back({operation_id(f), operation_id(g)});
  }
  report.constructed = Structure(size);
  report.constructed.add("c0", Relation(size, 1, {{operation_id(pr2)}}));
  report.constructed.add("c1", Relation(size, 1, {{operation_id(pr1)}}));
  report.constructed.add("R", Relation(size, 2, std::move(pairs)));
  report.target = fixtures::b2();

  Homomorphism h{{operation_id(pr2), operation_id(pr1)}};
  if (is_homomorphism(report.target, report.constructed, h)) report.from_target = h;
  Homomorphism back{std::vector<Elem>(size, 1)};
  back.map[operation_id(pr2)] = 0;
  if (is_homomorphism(report.constructed, report.target, back)) report.to_target = back;
  return report;
}

FreeStructureReport free_structure_cycle(const Structure& a, std::size_t p,
                                         const std::vector<Operation>& polp, bool complete) {
  if (!is_prime(p)) throw InvalidArgument("cycle length must be prime");
  const std::size_t k = a.domain();
  const std::size_t size = checked_pow(k, checked_pow(k, p, 64), free_domain_cap);
  require_polymorphisms(a, polp, p);

  std::vector<std::size_t> rotate(p);
  for (std::size_t i = 0; i < p; ++i) rotate[i] = (i + 1) % p;
  const VarMap shift(p, rotate);

  FreeStructureReport report;
  report.polymorphisms_complete = complete;
  std::set<Elem> pol_ids;
  for (const auto& f : polp) pol_ids.insert(operation_id(f));

  std::vector<Tuple> pairs;
  for (const auto& f : polp) {
    const Operation g = minor(f, shift);
    if (g == f && !report.condition_witness) report.condition_witness = f;
    const Elem gid = operation_id(g);
    if (pol_ids.count(gid)) pairs.push_back({operation_id(f), gid});
  }
  report.constructed = Structure(size);
  report.constructed.add("R", Relation(size, 2, std::move(pairs)));
  report.target = fixtures::cycle(p);

  // F_i = i-fold shifts of the least table of each shift orbit.
  report.classes.assign(p, {});
  std::set<Elem> seen;
  for (Elem id : pol_ids) {
    if (seen.count(id)) continue;
    Operation f = operation_of_id(k, p, id);
    for (std::size_t i = 0; i < p; ++i) {
      const Elem fid = operation_id(f);
      report.classes[i].push_back(fid);
      seen.insert(fid);
      f = minor(f, shift);
    }
  }
  for (auto& c : report.classes) std::sort(c.begin(), c.end());

  bool disjoint = true;
  std::vector<int> class_of(size, -1);
  for (std::size_t i = 0; i < p; ++i) {
    for (Elem id : report.classes[i]) {
      if (class_of[id] >= 0 && class_of[id] != static_cast<int>(i)) disjoint = false;
      class_of[id] = static_cast<int>(i);
    }
  }
  if (!disjoint || report.classes[0].empty()) return report;

  Homomorphism h{std::vector<Elem>(size, 0)};
  for (std::size_t id = 0; id < size; ++id) {
    if (class_of[id] >= 0) h.map[id] = static_cast<Elem>(class_of[id]);
  }
  if (is_homomorphism(report.constructed, report.target, h)) report.to_target = h;

  Homomorphism back;
  Operation f = operation_of_id(k, p, report.classes[0].front());
  for (std::size_t i = 0; i < p; ++i) {
    back.map.push_back(operation_id(f));
    f = minor(f, shift);
  }
  if (is_homomorphism(report.target, report.constructed, back)) report.from_target = back;
  return report;
}

Dichotomy verify_dichotomy_c1_i2(const Structure& a) {
  Core core = core_of(a);
  if (core.structure.domain() == 1) {
    Structure witness(1);
    for (const auto& [name, r] : a.relations()) {
      witness.add(name, Relation(1, r.arity(), {Tuple(r.arity(), 0)}));
    }
    Dichotomy d{Dichotomy::Branch::c1_constructs_a, core, witness, {}, {}};
    Homomorphism there{{core.elements.front()}};
    if (is_homomorphism(witness, a, there)) d.there = there;
    Homomorphism back{std::vector<Elem>(a.domain(), 0)};
    if (is_homomorphism(a, witness, back)) d.back = back;
    return d;
  }

  const Structure expanded = expand_by_singletons(core.structure);
  // The singleton names added last, in element order.
  const auto& rels = expanded.relations();
  const std::size_t base = rels.size() - core.structure.domain();
  const std::string b0 = rels[base].first, b1 = rels[base + 1].first;
  const Structure s = pp_power(expanded, 1,
                               {{"c0", PPFormula{1, 0, {{b0, {0}}}, {}}},
                                {"c1", PPFormula{1, 0, {{b1, {0}}}, {}}}});
  const Structure i2 = fixtures::idempotent(2);

  Dichotomy d{Dichotomy::Branch::a_constructs_i2, std::move(core), s, {}, {}};
  Homomorphism g{std::vector<Elem>(s.domain(), 1)};
  g.map[0] = 0;
  if (is_homomorphism(s, i2, g)) d.there = g;
  Homomorphism h{{0, 1}};
  if (is_homomorphism(i2, s, h)) d.back = h;
  return d;
}

const char* to_string(Dichotomy::Branch b) {
  return b == Dichotomy::Branch::c1_constructs_a ? "c1_constructs_a" : "a_constructs_i2";
}

}  // namespace clonelab
