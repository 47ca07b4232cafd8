#include "clonelab/conditions.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>

#include "clonelab/parallel.hpp"

namespace clonelab {

MinorCondition::MinorCondition(std::string name,
                               std::vector<std::pair<std::string, std::size_t>> symbols,
                               std::vector<MinorIdentity> identities)
    : name_(std::move(name)), symbols_(std::move(symbols)), identities_(std::move(identities)) {
  std::set<std::string> names;
  for (const auto& [s, arity] : symbols_) {
    if (!names.insert(s).second) throw InvalidArgument("duplicate symbol '" + s + "'");
    if (arity < 1) throw InvalidArgument("symbol '" + s + "' must have positive arity");
  }
  for (const auto& id : identities_) {
    if (id.lhs_map.target_arity != id.rhs_map.target_arity) {
      throw InvalidArgument("identity maps must target the same variable count");
    }
    if (arity_of(id.lhs) != id.lhs_map.source_arity() ||
        arity_of(id.rhs) != id.rhs_map.source_arity()) {
      throw InvalidArgument("identity map length does not match symbol arity");
    }
  }
}

std::size_t MinorCondition::arity_of(std::string_view symbol) const {
  for (const auto& [s, arity] : symbols_)
    if (s == symbol) return arity;
  throw InvalidArgument("undeclared symbol '" + std::string(symbol) + "'");
}

namespace conditions {

namespace {

// Chains t_0 ≈ t_1 ≈ ... as consecutive identities over one symbol.
MinorCondition chain(std::string name, std::string symbol, std::size_t arity, std::size_t vars,
                     const std::vector<std::vector<std::size_t>>& terms) {
  std::vector<MinorIdentity> ids;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    ids.push_back({symbol, VarMap(vars, terms[i]), symbol, VarMap(vars, terms[i + 1])});
  }
  return MinorCondition(std::move(name), {{symbol, arity}}, std::move(ids));
}

std::vector<MinorIdentity> transpositions(const std::string& symbol, std::size_t n) {
  std::vector<MinorIdentity> ids;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<std::size_t> swapped(n);
    for (std::size_t j = 0; j < n; ++j) swapped[j] = j;
    std::swap(swapped[i], swapped[i + 1]);
    ids.push_back({symbol, VarMap::identity(n), symbol, VarMap(n, swapped)});
  }
  return ids;
}

// Terms w(x..x y x..x) with y at position `pos` (y = variable 1).
std::vector<std::size_t> near_unanimous(std::size_t n, std::size_t pos) {
  std::vector<std::size_t> t(n, 0);
  t[pos] = 1;
  return t;
}

}  // namespace

MinorCondition sigma_p(std::size_t p) {
  if (p < 2) throw InvalidArgument("sigma_p requires p >= 2");
  std::vector<std::size_t> rotated(p);
  for (std::size_t i = 0; i < p; ++i) rotated[i] = (i + 1) % p;
  return MinorCondition("sigma_p(" + std::to_string(p) + ")", {{"c", p}},
                        {{"c", VarMap::identity(p), "c", VarMap(p, rotated)}});
}

MinorCondition quasi_minority() {
  return chain("quasi_minority", "m", 3, 2, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {0, 0, 0}});
}

MinorCondition quasi_malcev() {
  return chain("quasi_malcev", "m", 3, 2, {{0, 1, 1}, {1, 1, 0}, {0, 0, 0}});
}

MinorCondition quasi_majority() {
  return chain("quasi_majority", "m", 3, 2, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}});
}

MinorCondition fs(std::size_t n) {
  if (n < 2) throw InvalidArgument("fs requires n >= 2");
  return MinorCondition("fs(" + std::to_string(n) + ")", {{"f", n}}, transpositions("f", n));
}

MinorCondition ts(std::size_t n) {
  if (n < 2) throw InvalidArgument("ts requires n >= 2");
  auto ids = transpositions("f", n);
  if (n >= 3) {
    // Variables: x = 0, y = 1, z_4.. = 2..n-2.
    std::vector<std::size_t> lhs{0, 0, 1}, rhs{0, 1, 1};
    for (std::size_t j = 3; j < n; ++j) {
      lhs.push_back(j - 1);
      rhs.push_back(j - 1);
    }
    ids.push_back({"f", VarMap(n - 1, lhs), "f", VarMap(n - 1, rhs)});
  }
  return MinorCondition("ts(" + std::to_string(n) + ")", {{"f", n}}, std::move(ids));
}

MinorCondition gm(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw InvalidArgument("gm requires odd n >= 3");
  auto ids = transpositions("f", n);
  // Variables: x = 0, y = 1, x_3.. = 2..n-1.
  std::vector<std::size_t> lhs{0, 0}, rhs{1, 1};
  for (std::size_t j = 2; j < n; ++j) {
    lhs.push_back(j);
    rhs.push_back(j);
  }
  ids.push_back({"f", VarMap(n, lhs), "f", VarMap(n, rhs)});
  return MinorCondition("gm(" + std::to_string(n) + ")", {{"f", n}}, std::move(ids));
}

MinorCondition wnu(std::size_t n) {
  if (n < 3) throw InvalidArgument("wnu requires n >= 3");
  std::vector<std::vector<std::size_t>> terms;
  for (std::size_t pos = n; pos-- > 0;) terms.push_back(near_unanimous(n, pos));
  return chain("wnu(" + std::to_string(n) + ")", "w", n, 2, terms);
}

MinorCondition qnu(std::size_t n) {
  if (n < 3) throw InvalidArgument("qnu requires n >= 3");
  std::vector<std::vector<std::size_t>> terms;
  for (std::size_t pos = n; pos-- > 0;) terms.push_back(near_unanimous(n, pos));
  terms.push_back(std::vector<std::size_t>(n, 0));
  return chain("qnu(" + std::to_string(n) + ")", "w", n, 2, terms);
}

MinorCondition builtin(std::string_view name, std::size_t param) {
  if (name == "sigma_p") return sigma_p(param);
  if (name == "quasi_minority") return quasi_minority();
  if (name == "quasi_malcev") return quasi_malcev();
  if (name == "quasi_majority") return quasi_majority();
  if (name == "fs") return fs(param);
  if (name == "ts") return ts(param);
  if (name == "gm") return gm(param);
  if (name == "wnu") return wnu(param);
  if (name == "qnu") return qnu(param);
  throw InvalidArgument("unknown condition '" + std::string(name) + "'");
}

}  // namespace conditions

std::string Violation::describe(const MinorCondition& condition) const {
  return condition.name() + ": identity " + std::to_string(identity) + " fails at valuation " +
         tuple_to_string(valuation) + " (" + std::to_string(lhs_value) +
         " != " + std::to_string(rhs_value) + ")";
}

namespace {

const Operation& lookup(const Assignment& assignment, const MinorCondition& condition,
                        const std::string& symbol) {
  auto it = assignment.find(symbol);
  if (it == assignment.end()) {
    throw InvalidArgument("assignment has no operation for symbol '" + symbol + "'");
  }
  if (it->second.arity() != condition.arity_of(symbol)) {
    throw InvalidArgument("symbol '" + symbol + "' has arity " +
                          std::to_string(condition.arity_of(symbol)) +
                          " but the assigned operation has arity " +
                          std::to_string(it->second.arity()));
  }
  return it->second;
}

std::optional<Violation> check_identity(const MinorIdentity& id, std::size_t index,
                                        const Operation& f, const Operation& g) {
  if (f.domain() != g.domain()) throw InvalidArgument("assignment mixes domain sizes");
  Operation left = minor(f, id.lhs_map);
  Operation right = minor(g, id.rhs_map);
  for (std::size_t x = 0; x < left.size(); ++x) {
    if (left.at(x) != right.at(x)) {
      Violation v;
      v.identity = index;
      v.valuation.assign(id.variables(), 0);
      decode_index(x, f.domain(), v.valuation);
      v.lhs_value = left.at(x);
      v.rhs_value = right.at(x);
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Violation> find_violation(const Assignment& assignment,
                                        const MinorCondition& condition) {
  std::optional<std::size_t> domain;
  for (const auto& [symbol, arity] : condition.symbols()) {
    const auto& f = lookup(assignment, condition, symbol);
    if (domain && *domain != f.domain()) throw InvalidArgument("assignment mixes domain sizes");
    domain = f.domain();
  }
  const auto& ids = condition.identities();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& f = lookup(assignment, condition, ids[i].lhs);
    const auto& g = lookup(assignment, condition, ids[i].rhs);
    if (auto v = check_identity(ids[i], i, f, g)) return v;
  }
  return std::nullopt;
}

bool satisfies(const Assignment& assignment, const MinorCondition& condition) {
  return !find_violation(assignment, condition).has_value();
}

bool satisfies(const Operation& f, const MinorCondition& condition) {
  if (condition.symbols().size() != 1) {
    throw InvalidArgument("condition '" + condition.name() + "' has more than one symbol");
  }
  Assignment a;
  a.emplace(condition.symbols().front().first, f);
  return satisfies(a, condition);
}

namespace {

// Backtracking over symbols with per-symbol candidate lists. Identities are
// checked as soon as both of their symbols are bound.
WitnessSearch product_search(const MinorCondition& condition,
                             const std::vector<std::vector<Operation>>& candidates,
                             std::uint64_t budget, bool lists_complete) {
  WitnessSearch result;
  const auto& symbols = condition.symbols();
  const std::size_t count = symbols.size();
  std::vector<std::size_t> bound_at(condition.identities().size(), 0);
  for (std::size_t i = 0; i < condition.identities().size(); ++i) {
    const auto& id = condition.identities()[i];
    std::size_t a = 0, b = 0;
    for (std::size_t s = 0; s < count; ++s) {
      if (symbols[s].first == id.lhs) a = s;
      if (symbols[s].first == id.rhs) b = s;
    }
    bound_at[i] = std::max(a, b);
  }

  std::vector<std::size_t> pick(count, 0);
  Assignment current;
  bool exhausted_budget = false;
  std::size_t depth = 0;
  if (count == 0) {
    result.witness = Assignment{};
    result.definitive = true;
    return result;
  }
  while (true) {
    if (pick[depth] >= candidates[depth].size()) {
      current.erase(symbols[depth].first);
      pick[depth] = 0;
      if (depth == 0) break;
      --depth;
      ++pick[depth];
      continue;
    }
    if (result.candidates_scanned >= budget) {
      exhausted_budget = true;
      break;
    }
    ++result.candidates_scanned;
    current.insert_or_assign(symbols[depth].first, candidates[depth][pick[depth]]);
    bool ok = true;
    for (std::size_t i = 0; i < bound_at.size() && ok; ++i) {
      if (bound_at[i] != depth) continue;
      const auto& id = condition.identities()[i];
      ok = !check_identity(id, i, current.at(id.lhs), current.at(id.rhs));
    }
    if (!ok) {
      ++pick[depth];
      continue;
    }
    if (depth + 1 == count) {
      result.witness = current;
      result.definitive = true;
      return result;
    }
    ++depth;
  }
  result.definitive = !exhausted_budget && lists_complete;
  return result;
}

}  // namespace

WitnessSearch find_witness(std::span<const Operation> pool, const MinorCondition& condition,
                           std::uint64_t budget) {
  std::vector<std::vector<Operation>> candidates;
  for (const auto& [symbol, arity] : condition.symbols()) {
    std::vector<Operation> fit;
    for (const auto& f : pool)
      if (f.arity() == arity) fit.push_back(f);
    candidates.push_back(std::move(fit));
  }
  return product_search(condition, candidates, budget, true);
}

WitnessSearch find_witness(const Structure& structure, Symmetry symmetry,
                           const MinorCondition& condition, std::uint64_t budget) {
  const auto& symbols = condition.symbols();
  if (symbols.size() == 1) {
    const std::string& symbol = symbols.front().first;
    OperationSpace space(structure.domain(), symbols.front().second, symmetry, UINT64_MAX);
    const std::uint64_t limit = std::min(space.size(), budget);
    const std::uint64_t chunk = 8192;
    std::atomic<std::uint64_t> best{UINT64_MAX};
    std::atomic<std::uint64_t> scanned{0};
    parallel_chunks(limit, chunk, [&](std::uint64_t begin, std::uint64_t end) {
      if (begin > best.load()) return false;
      std::uint64_t c = begin;
      space.for_each(begin, end, [&](const Operation& f) {
        ++scanned;
        Assignment a;
        a.emplace(symbol, f);
        if (is_polymorphism(f, structure) && satisfies(a, condition)) {
          std::uint64_t cur = best.load();
          while (c < cur && !best.compare_exchange_weak(cur, c)) {
          }
          return false;
        }
        ++c;
        return true;
      });
      return true;
    });
    WitnessSearch result;
    result.candidates_scanned = scanned.load();
    if (best.load() != UINT64_MAX) {
      Assignment a;
      a.emplace(symbol, space.at(best.load()));
      result.witness = std::move(a);
      result.definitive = true;
    } else {
      result.definitive = limit == space.size();
    }
    return result;
  }

  std::vector<std::vector<Operation>> candidates;
  bool complete = true;
  std::uint64_t remaining = budget;
  for (const auto& [symbol, arity] : symbols) {
    OperationSpace space(structure.domain(), arity, symmetry, UINT64_MAX);
    const std::uint64_t limit = std::min(space.size(), remaining);
    complete = complete && limit == space.size();
    remaining -= limit;
    std::vector<Operation> fit;
    space.for_each(0, limit, [&](const Operation& f) {
      if (is_polymorphism(f, structure)) fit.push_back(f);
      return true;
    });
    candidates.push_back(std::move(fit));
  }
  auto result = product_search(condition, candidates, budget, complete);
  return result;
}

}  // namespace clonelab
