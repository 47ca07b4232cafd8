#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "clonelab/common.hpp"

namespace clonelab {

/// A total finitary operation f: E_k^n -> E_k stored as a value table.
///
/// The tuple (x_1, ..., x_n) lives at index sum_i x_i * k^(n-i), so x_1 is the
/// most significant digit. Arity is at least 1; domain size is 1..256.
class Operation {
 public:
  Operation(std::size_t domain, std::size_t arity, std::vector<std::uint8_t> table);

  /// Tabulates `fn` over all k^n argument tuples.
  static Operation tabulate(std::size_t domain, std::size_t arity,
                            const std::function<Elem(std::span<const Elem>)>& fn);

  std::size_t domain() const noexcept { return domain_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return table_.size(); }
  std::span<const std::uint8_t> table() const noexcept { return table_; }

  /// Value at a raw table index (no range checks beyond the vector's).
  Elem at(std::size_t index) const noexcept { return table_[index]; }

  /// Checked evaluation; throws InvalidArgument on arity or range mismatch.
  Elem operator()(std::span<const Elem> args) const;
  Elem operator()(std::initializer_list<Elem> args) const {
    return (*this)(std::span<const Elem>(args.begin(), args.size()));
  }

  friend bool operator==(const Operation&, const Operation&) = default;
  friend std::strong_ordering operator<=>(const Operation& a, const Operation& b);

 private:
  std::size_t domain_;
  std::size_t arity_;
  std::vector<std::uint8_t> table_;
};

/// A map sigma: E_n -> E_r between variable positions (0-based).
struct VarMap {
  std::size_t target_arity = 0;
  std::vector<std::size_t> map;

  VarMap() = default;
  VarMap(std::size_t target, std::vector<std::size_t> entries);

  std::size_t source_arity() const noexcept { return map.size(); }

  static VarMap identity(std::size_t n);

  /// `(this ; then)`: first this, then `then`, i.e. i -> then(this(i)).
  VarMap followed_by(const VarMap& then) const;

  friend bool operator==(const VarMap&, const VarMap&) = default;
};

Operation make_projection(std::size_t k, std::size_t n, std::size_t i);
Operation make_constant(std::size_t k, std::size_t n, Elem c);

Elem apply(const Operation& f, std::span<const Elem> args);

/// f_sigma(x_0..x_{r-1}) = f(x_{sigma(0)}, ..., x_{sigma(n-1)}).
Operation minor(const Operation& f, const VarMap& sigma);

/// h(x) = f(g_1(x), ..., g_n(x)).
Operation compose(const Operation& f, std::span<const Operation> gs);

bool is_idempotent(const Operation& f);

enum class Symmetry { none, cyclic, fully_symmetric };

/// The candidate space of n-ary operations over E_k whose tables are
/// constant on the orbits of a symmetry group acting on argument tuples.
/// Candidate i assigns digit j of i (base k, most significant first) to the
/// j-th orbit, orbits ordered by their least table index. Candidate order
/// is therefore lexicographic order of the tables.
class OperationSpace {
 public:
  static constexpr std::uint64_t default_cap = 10'000'000;

  OperationSpace(std::size_t k, std::size_t n, Symmetry symmetry,
                 std::uint64_t cap = default_cap);

  std::size_t domain() const noexcept { return k_; }
  std::size_t arity() const noexcept { return n_; }
  std::size_t orbit_count() const noexcept { return orbit_count_; }
  std::uint64_t size() const noexcept { return size_; }
  const std::vector<std::size_t>& orbit_of() const noexcept { return orbit_of_; }

  Operation at(std::uint64_t candidate) const;

  /// Visits candidates in [begin, end) in order until `visit` returns false.
  /// Returns the number of candidates visited.
  std::uint64_t for_each(std::uint64_t begin, std::uint64_t end,
                         const std::function<bool(const Operation&)>& visit) const;

 private:
  std::size_t k_;
  std::size_t n_;
  std::vector<std::size_t> orbit_of_;
  std::size_t orbit_count_ = 0;
  std::uint64_t size_ = 0;
};

/// Streams the operations of the given symmetry class satisfying `predicate`.
/// `visit` may return false to stop early. Throws CapExceeded if the candidate
/// count exceeds `cap`.
void enumerate_operations(std::size_t k, std::size_t n, Symmetry symmetry,
                          const std::function<bool(const Operation&)>& predicate,
                          const std::function<bool(const Operation&)>& visit,
                          std::uint64_t cap = OperationSpace::default_cap);

/// Convenience form collecting every match.
std::vector<Operation> enumerate_operations(
    std::size_t k, std::size_t n, Symmetry symmetry,
    const std::function<bool(const Operation&)>& predicate = {},
    std::uint64_t cap = OperationSpace::default_cap);

struct CloneOptions {
  /// Arities below min_arity are skipped; each arity is generated independently.
  std::size_t min_arity = 1;
  std::size_t max_arity = 3;
  std::uint64_t budget = 1'000'000;
  /// Optional early stop: generation halts as soon as a new table matches.
  std::function<bool(const Operation&)> stop_when;
};

struct GeneratedClone {
  /// Operations of arity min_arity..max_arity, ascending arity, discovery order.
  std::vector<Operation> operations;
  /// True iff the closure reached a fixed point at every arity.
  bool fixed_point = false;
  std::optional<Operation> stopped_at;
};

/// Bounded clone generation. The m-ary part of the clone generated by F is the
/// subuniverse of (E_k)^(k^m) generated by the m projections under F, so each
/// arity is closed breadth-first (by term depth) with table deduplication.
GeneratedClone generate_clone(std::size_t k, std::span<const Operation> generators,
                              const CloneOptions& options = {});

}  // namespace clonelab
