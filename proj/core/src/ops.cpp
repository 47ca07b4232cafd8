#include "clonelab/ops.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace clonelab {

namespace {

std::size_t table_size(std::size_t k, std::size_t n) {
  return static_cast<std::size_t>(checked_pow(k, n, std::uint64_t{1} << 32));
}

std::string key_of(const std::vector<std::uint8_t>& table) {
  return std::string(table.begin(), table.end());
}

}  // namespace

Operation::Operation(std::size_t domain, std::size_t arity, std::vector<std::uint8_t> table)
    : domain_(domain), arity_(arity), table_(std::move(table)) {
  if (domain_ < 1 || domain_ > 256) {
    throw InvalidArgument("operation domain size must be in 1..256, got " +
                          std::to_string(domain_));
  }
  if (arity_ < 1) throw InvalidArgument("operations of arity 0 are not represented");
  if (table_.size() != table_size(domain_, arity_)) {
    throw InvalidArgument("table length " + std::to_string(table_.size()) +
                          " != k^n = " + std::to_string(table_size(domain_, arity_)));
  }
  for (auto v : table_) {
    if (v >= domain_) {
      throw InvalidArgument("table entry " + std::to_string(v) + " out of range for k=" +
                            std::to_string(domain_));
    }
  }
}

Operation Operation::tabulate(std::size_t domain, std::size_t arity,
                              const std::function<Elem(std::span<const Elem>)>& fn) {
  const std::size_t size = table_size(domain, arity);
  std::vector<std::uint8_t> table(size);
  Tuple args(arity, 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    table[idx] = static_cast<std::uint8_t>(fn(args));
    for (std::size_t i = arity; i-- > 0;) {
      if (++args[i] < domain) break;
      args[i] = 0;
    }
  }
  return Operation(domain, arity, std::move(table));
}

Elem Operation::operator()(std::span<const Elem> args) const {
  if (args.size() != arity_) {
    throw InvalidArgument("expected " + std::to_string(arity_) + " arguments, got " +
                          std::to_string(args.size()));
  }
  std::size_t index = 0;
  for (Elem a : args) {
    if (a >= domain_) {
      throw InvalidArgument("argument " + std::to_string(a) + " out of range for k=" +
                            std::to_string(domain_));
    }
    index = index * domain_ + a;
  }
  return table_[index];
}

std::strong_ordering operator<=>(const Operation& a, const Operation& b) {
  if (auto c = a.domain_ <=> b.domain_; c != 0) return c;
  if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.table_.begin(), a.table_.end(),
                                                b.table_.begin(), b.table_.end());
}

VarMap::VarMap(std::size_t target, std::vector<std::size_t> entries)
    : target_arity(target), map(std::move(entries)) {
  for (auto v : map) {
    if (v >= target_arity) {
      throw InvalidArgument("variable map entry " + std::to_string(v) +
                            " out of range for target arity " + std::to_string(target_arity));
    }
  }
}

VarMap VarMap::identity(std::size_t n) {
  std::vector<std::size_t> entries(n);
  for (std::size_t i = 0; i < n; ++i) entries[i] = i;
  return VarMap(n, std::move(entries));
}

VarMap VarMap::followed_by(const VarMap& then) const {
  if (then.source_arity() != target_arity) {
    throw InvalidArgument("cannot chain variable maps: arity mismatch");
  }
  std::vector<std::size_t> entries(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) entries[i] = then.map[map[i]];
  return VarMap(then.target_arity, std::move(entries));
}

Operation make_projection(std::size_t k, std::size_t n, std::size_t i) {
  if (k < 1) throw InvalidArgument("domain size must be positive");
  if (i < 1 || i > n) {
    throw InvalidArgument("projection index " + std::to_string(i) + " out of range 1.." +
                          std::to_string(n));
  }
  return Operation::tabulate(k, n, [i](std::span<const Elem> x) { return x[i - 1]; });
}

Operation make_constant(std::size_t k, std::size_t n, Elem c) {
  if (c >= k) throw InvalidArgument("constant out of range");
  return Operation(k, n, std::vector<std::uint8_t>(table_size(k, n), static_cast<std::uint8_t>(c)));
}

Elem apply(const Operation& f, std::span<const Elem> args) { return f(args); }

Operation minor(const Operation& f, const VarMap& sigma) {
  if (sigma.source_arity() != f.arity()) {
    throw InvalidArgument("minor: variable map has source arity " +
                          std::to_string(sigma.source_arity()) + " but operation has arity " +
                          std::to_string(f.arity()));
  }
  const std::size_t k = f.domain();
  const std::size_t r = sigma.target_arity;
  if (r == 0) throw InvalidArgument("minor: target arity must be positive");
  const std::size_t size = table_size(k, r);
  // weight[j] = contribution of target variable j to the source index.
  std::vector<std::size_t> weight(r, 0);
  std::size_t place = 1;
  for (std::size_t i = f.arity(); i-- > 0;) {
    weight[sigma.map[i]] += place;
    place *= k;
  }
  std::vector<std::uint8_t> table(size);
  Tuple x(r, 0);
  std::size_t source = 0;
  for (std::size_t idx = 0; idx < size; ++idx) {
    table[idx] = f.table()[source];
    for (std::size_t j = r; j-- > 0;) {
      if (++x[j] < k) {
        source += weight[j];
        break;
      }
      source -= weight[j] * (k - 1);
      x[j] = 0;
    }
  }
  return Operation(k, r, std::move(table));
}

Operation compose(const Operation& f, std::span<const Operation> gs) {
  if (gs.size() != f.arity()) {
    throw InvalidArgument("compose: head has arity " + std::to_string(f.arity()) + " but " +
                          std::to_string(gs.size()) + " arguments given");
  }
  const std::size_t k = f.domain();
  const std::size_t m = gs.front().arity();
  for (const auto& g : gs) {
    if (g.domain() != k) throw InvalidArgument("compose: domain mismatch");
    if (g.arity() != m) throw InvalidArgument("compose: argument arities differ");
  }
  const std::size_t size = gs.front().size();
  std::vector<std::uint8_t> table(size);
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::size_t head = 0;
    for (const auto& g : gs) head = head * k + g.table()[idx];
    table[idx] = f.table()[head];
  }
  return Operation(k, m, std::move(table));
}

bool is_idempotent(const Operation& f) {
  const std::size_t k = f.domain();
  for (std::size_t x = 0; x < k; ++x) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < f.arity(); ++i) index = index * k + x;
    if (f.at(index) != x) return false;
  }
  return true;
}

OperationSpace::OperationSpace(std::size_t k, std::size_t n, Symmetry symmetry,
                               std::uint64_t cap)
    : k_(k), n_(n) {
  if (k < 1 || k > 256) throw InvalidArgument("domain size must be in 1..256");
  if (n < 1) throw InvalidArgument("arity must be positive");
  const std::size_t size = table_size(k, n);
  std::vector<std::size_t> canonical(size);
  Tuple x(n), y(n);
  for (std::size_t idx = 0; idx < size; ++idx) {
    decode_index(idx, k, x);
    std::size_t best = idx;
    switch (symmetry) {
      case Symmetry::none:
        break;
      case Symmetry::cyclic:
        for (std::size_t s = 1; s < n; ++s) {
          for (std::size_t i = 0; i < n; ++i) y[i] = x[(i + s) % n];
          best = std::min<std::size_t>(best, encode_index(y.data(), n, k));
        }
        break;
      case Symmetry::fully_symmetric:
        y = x;
        std::sort(y.begin(), y.end());
        best = encode_index(y.data(), n, k);
        break;
    }
    canonical[idx] = best;
  }
  orbit_of_.assign(size, 0);
  std::vector<std::size_t> orbit_of_canonical(size, 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (canonical[idx] == idx) orbit_of_canonical[idx] = orbit_count_++;
    orbit_of_[idx] = orbit_of_canonical[canonical[idx]];
  }
  size_ = checked_pow(k, orbit_count_, cap);
}

Operation OperationSpace::at(std::uint64_t candidate) const {
  std::vector<Elem> digits(orbit_count_);
  decode_index(candidate, k_, digits);
  std::vector<std::uint8_t> table(orbit_of_.size());
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    table[idx] = static_cast<std::uint8_t>(digits[orbit_of_[idx]]);
  }
  return Operation(k_, n_, std::move(table));
}

std::uint64_t OperationSpace::for_each(std::uint64_t begin, std::uint64_t end,
                                       const std::function<bool(const Operation&)>& visit) const {
  end = std::min(end, size_);
  if (begin >= end) return 0;
  std::vector<Elem> digits(orbit_count_);
  decode_index(begin, k_, digits);
  std::uint64_t visited = 0;
  for (std::uint64_t c = begin; c < end; ++c) {
    std::vector<std::uint8_t> table(orbit_of_.size());
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      table[idx] = static_cast<std::uint8_t>(digits[orbit_of_[idx]]);
    }
    ++visited;
    if (!visit(Operation(k_, n_, std::move(table)))) break;
    for (std::size_t j = orbit_count_; j-- > 0;) {
      if (++digits[j] < k_) break;
      digits[j] = 0;
    }
  }
  return visited;
}

void enumerate_operations(std::size_t k, std::size_t n, Symmetry symmetry,
                          const std::function<bool(const Operation&)>& predicate,
                          const std::function<bool(const Operation&)>& visit,
                          std::uint64_t cap) {
  OperationSpace space(k, n, symmetry, cap);
  space.for_each(0, space.size(), [&](const Operation& f) {
    if (predicate && !predicate(f)) return true;
    return visit(f);
  });
}

std::vector<Operation> enumerate_operations(std::size_t k, std::size_t n, Symmetry symmetry,
                                            const std::function<bool(const Operation&)>& predicate,
                                            std::uint64_t cap) {
  std::vector<Operation> out;
  enumerate_operations(
      k, n, symmetry, predicate,
      [&](const Operation& f) {
        out.push_back(f);
        return true;
      },
      cap);
  return out;
}

GeneratedClone generate_clone(std::size_t k, std::span<const Operation> generators,
                              const CloneOptions& options) {
  for (const auto& g : generators) {
    if (g.domain() != k) throw InvalidArgument("generate_clone: generator domain mismatch");
  }
  if (options.min_arity < 1 || options.max_arity < options.min_arity) {
    throw InvalidArgument("generate_clone: need 1 <= min_arity <= max_arity");
  }

  GeneratedClone result;
  result.fixed_point = true;
  std::uint64_t stored = 0;

  for (std::size_t m = options.min_arity; m <= options.max_arity; ++m) {
    const std::size_t size = table_size(k, m);
    std::vector<std::vector<std::uint8_t>> elems;
    std::unordered_set<std::string> seen;

    // Returns false when generation must stop (budget or early-stop hit).
    auto add = [&](std::vector<std::uint8_t> table) {
      if (!seen.insert(key_of(table)).second) return true;
      if (stored >= options.budget) {
        result.fixed_point = false;
        return false;
      }
      ++stored;
      elems.push_back(std::move(table));
      Operation op(k, m, elems.back());
      result.operations.push_back(op);
      if (options.stop_when && options.stop_when(op)) {
        result.stopped_at = op;
        result.fixed_point = false;
        return false;
      }
      return true;
    };

    bool running = true;
    for (std::size_t i = 1; i <= m && running; ++i) {
      auto p = make_projection(k, m, i);
      running = add(std::vector<std::uint8_t>(p.table().begin(), p.table().end()));
    }

    // k^(k^m), or 0 when that overflows; reaching it means every m-ary operation is present.
    std::uint64_t all_ops = 1;
    for (std::size_t x = 0; x < size && all_ops != 0; ++x) {
      all_ops = all_ops > UINT64_MAX / k ? 0 : all_ops * k;
    }
    auto complete = [&] { return all_ops != 0 && elems.size() == all_ops; };

    std::size_t frontier_begin = 0;
    while (running && !complete()) {
      const std::size_t old_end = elems.size();
      if (frontier_begin == old_end) break;
      for (const auto& g : generators) {
        if (!running) break;
        const std::size_t a = g.arity();
        // Semi-naive: every a-tuple of elements from [0, old_end) that uses at
        // least one element of the current frontier [frontier_begin, old_end).
        std::vector<std::size_t> pick(a, 0);
        while (running) {
          bool uses_frontier = false;
          for (auto v : pick) uses_frontier |= (v >= frontier_begin);
          if (uses_frontier) {
            std::vector<std::uint8_t> table(size);
            for (std::size_t x = 0; x < size; ++x) {
              std::size_t head = 0;
              for (auto v : pick) head = head * k + elems[v][x];
              table[x] = g.table()[head];
            }
            running = add(std::move(table));
            if (complete()) break;
          }
          std::size_t j = a;
          while (j-- > 0) {
            if (++pick[j] < old_end) break;
            pick[j] = 0;
          }
          if (j == static_cast<std::size_t>(-1)) break;
        }
        if (complete()) break;
      }
      frontier_begin = old_end;
    }
    if (!running) return result;
  }
  return result;
}

}  // namespace clonelab
