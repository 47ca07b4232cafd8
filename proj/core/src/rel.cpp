#include "clonelab/rel.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "clonelab/parallel.hpp"

namespace clonelab {

namespace {

constexpr std::uint64_t dense_limit = std::uint64_t{1} << 22;
constexpr std::uint64_t tuple_space_cap = 50'000'000;

std::uint64_t space_size(std::size_t k, std::size_t m, std::uint64_t cap = tuple_space_cap) {
  return checked_pow(k, m, cap);
}

std::uint64_t encode(std::span<const Elem> t, std::size_t k) {
  return encode_index(t.data(), t.size(), k);
}

// Visits every n-tuple of row indices into a relation of `rows` rows.
template <typename Fn>
bool for_each_pick(std::size_t rows, std::size_t n, Fn&& fn) {
  if (rows == 0) return true;
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    if (!fn(pick)) return false;
    std::size_t j = n;
    while (j-- > 0) {
      if (++pick[j] < rows) break;
      pick[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return true;
  }
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

AbelianGroup cyclic_group(std::size_t order, std::size_t prime, std::size_t exponent) {
  AbelianGroup g;
  g.name = "Z" + std::to_string(order);
  g.prime = prime;
  g.exponent = exponent;
  g.add.assign(order, std::vector<Elem>(order));
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b) g.add[a][b] = static_cast<Elem>((a + b) % order);
  return g;
}

// All surjections from `values` onto E_order, in lexicographic order.
std::vector<std::vector<Elem>> surjections(std::size_t from, std::size_t order) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> image(from, 0);
  const std::uint64_t total = checked_pow(order, from, 1'000'000);
  for (std::uint64_t c = 0; c < total; ++c) {
    decode_index(c, order, image);
    std::vector<bool> hit(order, false);
    for (auto v : image) hit[v] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) out.push_back(image);
  }
  return out;
}

}  // namespace

Relation::Relation(std::size_t domain, std::size_t arity, std::vector<Tuple> tuples)
    : domain_(domain), arity_(arity), tuples_(std::move(tuples)) {
  if (domain_ < 1) throw InvalidArgument("relation domain size must be positive");
  if (arity_ < 1) throw InvalidArgument("relation arity must be positive");
  for (const auto& t : tuples_) {
    if (t.size() != arity_) {
      throw InvalidArgument("tuple " + tuple_to_string(t) + " does not have arity " +
                            std::to_string(arity_));
    }
    for (auto v : t) {
      if (v >= domain_) {
        throw InvalidArgument("tuple " + tuple_to_string(t) + " has an entry outside E_" +
                              std::to_string(domain_));
      }
    }
  }
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());

  std::uint64_t size = 1;
  bool small = true;
  for (std::size_t i = 0; i < arity_ && small; ++i) {
    size *= domain_;
    small = size <= dense_limit;
  }
  if (small) {
    dense_.assign(size, false);
    for (const auto& t : tuples_) dense_[encode(t, domain_)] = true;
  }
}

Relation Relation::full(std::size_t domain, std::size_t arity) {
  const std::uint64_t size = space_size(domain, arity);
  std::vector<Tuple> tuples(size, Tuple(arity));
  for (std::uint64_t i = 0; i < size; ++i) decode_index(i, domain, tuples[i]);
  return Relation(domain, arity, std::move(tuples));
}

bool Relation::contains(std::span<const Elem> t) const {
  if (t.size() != arity_) return false;
  for (auto v : t)
    if (v >= domain_) return false;
  if (!dense_.empty()) return dense_[encode(t, domain_)];
  return std::binary_search(tuples_.begin(), tuples_.end(), t,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                  b.end());
                            });
}

Structure::Structure(std::size_t domain, std::vector<std::pair<std::string, Relation>> relations)
    : domain_(domain) {
  for (auto& [name, rel] : relations) add(std::move(name), std::move(rel));
}

void Structure::add(std::string name, Relation relation) {
  if (relation.domain() != domain_) {
    throw InvalidArgument("relation '" + name + "' has domain " +
                          std::to_string(relation.domain()) + " but structure has " +
                          std::to_string(domain_));
  }
  if (find(name)) throw InvalidArgument("duplicate relation name '" + name + "'");
  relations_.emplace_back(std::move(name), std::move(relation));
}

const Relation* Structure::find(std::string_view name) const {
  for (const auto& [n, r] : relations_)
    if (n == name) return &r;
  return nullptr;
}

const Relation& Structure::at(std::string_view name) const {
  if (const auto* r = find(name)) return *r;
  throw InvalidArgument("structure has no relation named '" + std::string(name) + "'");
}

Structure Structure::induced(std::span<const Elem> elements) const {
  std::vector<long> relabel(domain_, -1);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] >= domain_) throw InvalidArgument("induced: element out of range");
    relabel[elements[i]] = static_cast<long>(i);
  }
  Structure out(elements.size());
  for (const auto& [name, rel] : relations_) {
    std::vector<Tuple> kept;
    for (const auto& t : rel.tuples()) {
      Tuple u(t.size());
      bool inside = true;
      for (std::size_t i = 0; i < t.size() && inside; ++i) {
        inside = relabel[t[i]] >= 0;
        if (inside) u[i] = static_cast<Elem>(relabel[t[i]]);
      }
      if (inside) kept.push_back(std::move(u));
    }
    out.add(name, Relation(elements.size(), rel.arity(), std::move(kept)));
  }
  return out;
}

bool preserves(const Operation& f, const Relation& r) {
  if (f.domain() != r.domain()) {
    throw InvalidArgument("preserves: operation domain " + std::to_string(f.domain()) +
                          " != relation domain " + std::to_string(r.domain()));
  }
  const auto& rows = r.tuples();
  const std::size_t k = f.domain();
  const std::size_t m = r.arity();
  Tuple image(m);
  return for_each_pick(rows.size(), f.arity(), [&](const std::vector<std::size_t>& pick) {
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t index = 0;
      for (auto row : pick) index = index * k + rows[row][j];
      image[j] = f.at(index);
    }
    return r.contains(image);
  });
}

bool is_polymorphism(const Operation& f, const Structure& s) {
  for (const auto& [name, rel] : s.relations())
    if (!preserves(f, rel)) return false;
  return true;
}

std::vector<Operation> pol(std::size_t k, std::span<const Relation> gamma, std::size_t n,
                           const PolOptions& options) {
  for (const auto& r : gamma)
    if (r.domain() != k) throw InvalidArgument("pol: relation domain mismatch");
  OperationSpace space(k, n, options.symmetry, options.cap);

  const std::uint64_t chunk = 4096;
  const std::uint64_t chunks = (space.size() + chunk - 1) / chunk;
  std::vector<std::vector<Operation>> found(chunks);
  parallel_chunks(space.size(), chunk, [&](std::uint64_t begin, std::uint64_t end) {
    auto& out = found[begin / chunk];
    space.for_each(begin, end, [&](const Operation& f) {
      for (const auto& r : gamma)
        if (!preserves(f, r)) return true;
      out.push_back(f);
      return true;
    });
    return true;
  });
  std::vector<Operation> result;
  for (auto& part : found)
    for (auto& f : part) result.push_back(std::move(f));
  return result;
}

std::vector<Operation> pol(const Structure& s, std::size_t n, const PolOptions& options) {
  std::vector<Relation> gamma;
  for (const auto& [name, rel] : s.relations()) gamma.push_back(rel);
  return pol(s.domain(), gamma, n, options);
}

std::optional<Relation> inv_closure_bounded(std::size_t k, std::span<const Operation> generators,
                                            std::span<const Tuple> seed, std::size_t arity,
                                            std::uint64_t budget) {
  for (const auto& g : generators)
    if (g.domain() != k) throw InvalidArgument("inv_closure: generator domain mismatch");
  if (arity < 1) throw InvalidArgument("inv_closure: arity must be positive");
  checked_pow(k, arity, UINT64_MAX / 2);

  std::vector<Tuple> rows;
  std::unordered_set<std::uint64_t> seen;
  auto add = [&](const Tuple& t) {
    if (t.size() != arity) throw InvalidArgument("inv_closure: seed tuple arity mismatch");
    for (auto v : t)
      if (v >= k) throw InvalidArgument("inv_closure: seed tuple out of range");
    if (seen.insert(encode(t, k)).second) rows.push_back(t);
  };
  for (const auto& t : seed) add(t);

  std::size_t frontier_begin = 0;
  Tuple image(arity);
  while (frontier_begin < rows.size()) {
    const std::size_t old_end = rows.size();
    for (const auto& g : generators) {
      std::vector<std::size_t> pick(g.arity(), 0);
      while (true) {
        bool uses_frontier = false;
        for (auto v : pick) uses_frontier |= (v >= frontier_begin);
        if (uses_frontier) {
          for (std::size_t j = 0; j < arity; ++j) {
            std::size_t index = 0;
            for (auto row : pick) index = index * k + rows[row][j];
            image[j] = g.at(index);
          }
          if (seen.insert(encode(image, k)).second) {
            rows.push_back(image);
            if (rows.size() > budget) return std::nullopt;
          }
        }
        std::size_t j = pick.size();
        while (j-- > 0) {
          if (++pick[j] < old_end) break;
          pick[j] = 0;
        }
        if (j == static_cast<std::size_t>(-1)) break;
      }
    }
    frontier_begin = old_end;
  }
  return Relation(k, arity, std::move(rows));
}

Relation inv_closure(std::size_t k, std::span<const Operation> generators,
                     std::span<const Tuple> seed, std::size_t arity) {
  return *inv_closure_bounded(k, generators, seed, arity, UINT64_MAX);
}

std::vector<Tuple> essential_tuples(const Relation& r) {
  const std::size_t k = r.domain();
  const std::size_t m = r.arity();
  const std::uint64_t size = space_size(k, m);
  std::vector<Tuple> out;
  Tuple t(m), u(m);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    decode_index(idx, k, t);
    if (r.contains(t)) continue;
    bool essential = true;
    for (std::size_t i = 0; i < m && essential; ++i) {
      u = t;
      bool fixable = false;
      for (Elem b = 0; b < k && !fixable; ++b) {
        u[i] = b;
        fixable = r.contains(u);
      }
      essential = fixable;
    }
    if (essential) out.push_back(t);
  }
  return out;
}

bool is_essential(const Relation& r) { return !essential_tuples(r).empty(); }

std::vector<Block> blocks(const Relation& r) {
  std::vector<Tuple> items = r.tuples();
  for (auto& t : essential_tuples(r)) items.push_back(std::move(t));
  std::sort(items.begin(), items.end());

  const std::size_t k = r.domain();
  const std::size_t m = r.arity();
  UnionFind uf(items.size());
  // Tuples differing in exactly coordinate i agree on the key (i, t with t_i := 0).
  for (std::size_t i = 0; i < m; ++i) {
    std::unordered_map<std::uint64_t, std::size_t> first;
    for (std::size_t idx = 0; idx < items.size(); ++idx) {
      Tuple key = items[idx];
      key[i] = 0;
      auto [it, inserted] = first.emplace(encode(key, k), idx);
      if (!inserted) uf.unite(it->second, idx);
    }
  }

  std::map<std::size_t, Block> by_root;
  for (std::size_t idx = 0; idx < items.size(); ++idx) {
    auto& block = by_root[uf.find(idx)];
    if (!r.contains(items[idx])) block.is_trivial = false;
    block.members.push_back(items[idx]);
  }

  std::vector<Block> out;
  for (auto& [root, block] : by_root) {
    std::vector<std::vector<Elem>> factors(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& t : block.members) factors[i].push_back(t[i]);
      std::sort(factors[i].begin(), factors[i].end());
      factors[i].erase(std::unique(factors[i].begin(), factors[i].end()), factors[i].end());
    }
    std::uint64_t product = 1;
    for (const auto& f : factors) product *= f.size();
    if (product == block.members.size()) block.product_factors = std::move(factors);
    out.push_back(std::move(block));
  }
  return out;
}

std::vector<AbelianGroup> small_prime_power_groups() {
  std::vector<AbelianGroup> groups{cyclic_group(2, 2, 1), cyclic_group(3, 3, 1),
                                   cyclic_group(4, 2, 2)};
  AbelianGroup klein;
  klein.name = "Z2xZ2";
  klein.prime = 2;
  klein.exponent = 2;
  klein.add.assign(4, std::vector<Elem>(4));
  for (Elem a = 0; a < 4; ++a)
    for (Elem b = 0; b < 4; ++b) klein.add[a][b] = a ^ b;
  groups.push_back(std::move(klein));
  return groups;
}

std::optional<BlockGroupStructure> block_group_structure(const Relation& r, const Block& b) {
  if (b.is_trivial) throw InvalidArgument("block_group_structure: block is trivial");
  if (!b.product_factors) throw InvalidArgument("block_group_structure: block is not a product");
  const auto& factors = *b.product_factors;
  const std::size_t m = factors.size();
  std::size_t smallest = SIZE_MAX;
  for (const auto& f : factors) {
    if (f.size() > 4) throw InvalidArgument("block_group_structure: factor larger than 4");
    smallest = std::min(smallest, f.size());
  }

  // Positions of values inside each factor.
  std::vector<std::map<Elem, std::size_t>> position(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < factors[i].size(); ++j) position[i][factors[i][j]] = j;

  std::vector<Tuple> inside;
  for (const auto& t : b.members)
    if (r.contains(t)) inside.push_back(t);

  for (const auto& group : small_prime_power_groups()) {
    const std::size_t order = group.order();
    if (order > smallest) continue;
    std::vector<Elem> negate(order);
    for (Elem a = 0; a < order; ++a)
      for (Elem c = 0; c < order; ++c)
        if (group.add[a][c] == 0) negate[a] = c;

    std::vector<std::vector<std::vector<Elem>>> choices(m);
    for (std::size_t i = 0; i + 1 < m; ++i) choices[i] = surjections(factors[i].size(), order);

    auto sum_prefix = [&](const Tuple& t, const std::vector<const std::vector<Elem>*>& phi,
                          std::size_t upto) {
      Elem s = 0;
      for (std::size_t i = 0; i < upto; ++i) s = group.add[s][(*phi[i])[position[i].at(t[i])]];
      return s;
    };

    std::vector<std::size_t> pick(m > 0 ? m - 1 : 0, 0);
    std::vector<const std::vector<Elem>*> phi(m, nullptr);
    bool more = true;
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (choices[i].empty()) more = false;
    while (more) {
      for (std::size_t i = 0; i + 1 < m; ++i) phi[i] = &choices[i][pick[i]];

      // The last map is forced on every value occurring in R ∩ B.
      std::vector<long> last(factors[m - 1].size(), -1);
      bool consistent = true;
      for (const auto& t : inside) {
        Elem want = negate[sum_prefix(t, phi, m - 1)];
        long& slot = last[position[m - 1].at(t[m - 1])];
        if (slot < 0) {
          slot = want;
        } else if (slot != static_cast<long>(want)) {
          consistent = false;
          break;
        }
      }
      if (consistent) {
        // Values of B_m never seen in R ∩ B: try every completion.
        std::vector<std::size_t> free_slots;
        for (std::size_t j = 0; j < last.size(); ++j)
          if (last[j] < 0) free_slots.push_back(j);
        const std::uint64_t completions = checked_pow(order, free_slots.size(), 1'000'000);
        std::vector<Elem> fill(free_slots.size());
        for (std::uint64_t c = 0; c < completions; ++c) {
          decode_index(c, order, fill);
          std::vector<Elem> candidate(last.size());
          for (std::size_t j = 0; j < last.size(); ++j)
            candidate[j] = last[j] < 0 ? 0 : static_cast<Elem>(last[j]);
          for (std::size_t s = 0; s < free_slots.size(); ++s) candidate[free_slots[s]] = fill[s];
          std::vector<bool> hit(order, false);
          for (auto v : candidate) hit[v] = true;
          if (!std::all_of(hit.begin(), hit.end(), [](bool h) { return h; })) continue;
          phi[m - 1] = &candidate;
          bool ok = true;
          for (const auto& t : b.members) {
            bool zero = sum_prefix(t, phi, m) == 0;
            if (zero != r.contains(t)) {
              ok = false;
              break;
            }
          }
          if (ok) {
            BlockGroupStructure out{group, std::vector<std::map<Elem, Elem>>(m)};
            for (std::size_t i = 0; i < m; ++i)
              for (std::size_t j = 0; j < factors[i].size(); ++j)
                out.phi[i][factors[i][j]] = (*phi[i])[j];
            return out;
          }
        }
      }

      std::size_t j = pick.size();
      while (j-- > 0) {
        if (++pick[j] < choices[j].size()) break;
        pick[j] = 0;
      }
      if (j == static_cast<std::size_t>(-1)) more = false;
    }
  }
  return std::nullopt;
}

bool is_n_decomposable(const Relation& r, std::size_t n) {
  if (n < 1) throw InvalidArgument("is_n_decomposable: n must be at least 1");
  const std::size_t m = r.arity();
  const std::size_t k = r.domain();
  if (n >= m) return true;

  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> comb(n);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    subsets.push_back(comb);
    std::size_t i = n;
    while (i-- > 0) {
      if (comb[i] < m - n + i) break;
    }
    if (i == static_cast<std::size_t>(-1)) break;
    ++comb[i];
    for (std::size_t j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
  }

  std::vector<std::unordered_set<std::uint64_t>> projections(subsets.size());
  Tuple part(n);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (const auto& t : r.tuples()) {
      for (std::size_t i = 0; i < n; ++i) part[i] = t[subsets[s][i]];
      projections[s].insert(encode(part, k));
    }
  }

  const std::uint64_t size = space_size(k, m);
  Tuple t(m);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    decode_index(idx, k, t);
    if (r.contains(t)) continue;
    bool in_all = true;
    for (std::size_t s = 0; s < subsets.size() && in_all; ++s) {
      for (std::size_t i = 0; i < n; ++i) part[i] = t[subsets[s][i]];
      in_all = projections[s].count(encode(part, k)) > 0;
    }
    if (in_all) return false;
  }
  return true;
}

Criticality is_critical(const Relation& r, std::span<const Operation> generators,
                        const CriticalityOptions& options) {
  if (!is_essential(r)) return Criticality::not_critical;
  for (const auto& g : generators) {
    if (!preserves(g, r)) {
      throw InvalidArgument("is_critical: a generator does not preserve the relation");
    }
  }
  const std::size_t k = r.domain();
  const std::size_t m = r.arity();
  const std::uint64_t size = space_size(k, m);

  std::vector<bool> meet(size, true);
  std::uint64_t work = 0;
  Tuple t(m);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    decode_index(idx, k, t);
    if (r.contains(t)) continue;
    std::vector<Tuple> seed = r.tuples();
    seed.push_back(t);
    auto closure = inv_closure_bounded(k, generators, seed, m, options.budget);
    if (!closure) return Criticality::unknown;
    work += closure->size();
    if (work > options.budget) return Criticality::unknown;
    std::vector<bool> mask(size, false);
    for (const auto& u : closure->tuples()) mask[encode(u, k)] = true;
    for (std::uint64_t j = 0; j < size; ++j) meet[j] = meet[j] && mask[j];
  }
  // The meet contains R; it is a proper superset iff it has more elements.
  std::uint64_t meet_size = std::count(meet.begin(), meet.end(), true);
  if (meet_size > r.size()) return Criticality::critical;
  return options.generators_complete ? Criticality::not_critical : Criticality::unknown;
}

const char* to_string(Criticality c) {
  switch (c) {
    case Criticality::critical:
      return "critical";
    case Criticality::not_critical:
      return "not_critical";
    case Criticality::unknown:
      return "unknown";
  }
  return "unknown";
}

}  // namespace clonelab
