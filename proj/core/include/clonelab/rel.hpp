#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clonelab/common.hpp"
#include "clonelab/ops.hpp"

namespace clonelab {

/// A finite relation R ⊆ E_k^m. Tuples are kept sorted lexicographically
/// without duplicates.
class Relation {
 public:
  Relation(std::size_t domain, std::size_t arity, std::vector<Tuple> tuples);

  static Relation full(std::size_t domain, std::size_t arity);

  std::size_t domain() const noexcept { return domain_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return tuples_.size(); }
  bool empty() const noexcept { return tuples_.empty(); }
  const std::vector<Tuple>& tuples() const noexcept { return tuples_; }

  bool contains(std::span<const Elem> t) const;

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.domain_ == b.domain_ && a.arity_ == b.arity_ && a.tuples_ == b.tuples_;
  }

 private:
  std::size_t domain_;
  std::size_t arity_;
  std::vector<Tuple> tuples_;
  // Dense membership table when k^m is small enough.
  std::vector<bool> dense_;
};

/// A relational structure: a domain E_k and an ordered list of named relations.
class Structure {
 public:
  explicit Structure(std::size_t domain) : domain_(domain) {}
  Structure(std::size_t domain, std::vector<std::pair<std::string, Relation>> relations);

  std::size_t domain() const noexcept { return domain_; }
  const std::vector<std::pair<std::string, Relation>>& relations() const noexcept {
    return relations_;
  }

  /// Appends a relation; throws if the name is taken or the domain differs.
  void add(std::string name, Relation relation);
  const Relation* find(std::string_view name) const;
  const Relation& at(std::string_view name) const;

  /// Substructure induced on `elements` (relabelled 0..|elements|-1 in order).
  Structure induced(std::span<const Elem> elements) const;

  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  std::size_t domain_;
  std::vector<std::pair<std::string, Relation>> relations_;
};

/// True iff f applied coordinatewise to any arity(f) tuples of R lands in R.
bool preserves(const Operation& f, const Relation& r);
bool is_polymorphism(const Operation& f, const Structure& s);

struct PolOptions {
  Symmetry symmetry = Symmetry::none;
  std::uint64_t cap = OperationSpace::default_cap;
};

/// All n-ary operations over E_k preserving every relation in `gamma`.
std::vector<Operation> pol(std::size_t k, std::span<const Relation> gamma, std::size_t n,
                           const PolOptions& options = {});
std::vector<Operation> pol(const Structure& s, std::size_t n, const PolOptions& options = {});

/// Smallest relation containing `seed` closed under the generators.
Relation inv_closure(std::size_t k, std::span<const Operation> generators,
                     std::span<const Tuple> seed, std::size_t arity);

/// As inv_closure, but gives up (nullopt) once more than `budget` tuples
/// would be produced.
std::optional<Relation> inv_closure_bounded(std::size_t k, std::span<const Operation> generators,
                                            std::span<const Tuple> seed, std::size_t arity,
                                            std::uint64_t budget);

/// Tuples outside R that can be moved into R by changing any single coordinate.
std::vector<Tuple> essential_tuples(const Relation& r);
bool is_essential(const Relation& r);

struct Block {
  std::vector<Tuple> members;  // sorted
  bool is_trivial = true;
  /// Per-coordinate value sets B_1..B_m when the block equals their product.
  std::optional<std::vector<std::vector<Elem>>> product_factors;
};

/// Connected components of the one-coordinate-difference graph on R ∪ Ess(R),
/// ordered by their least member.
std::vector<Block> blocks(const Relation& r);

/// A finite abelian group given by its Cayley table; element 0 is the zero.
struct AbelianGroup {
  std::string name;
  std::size_t prime = 0;
  std::size_t exponent = 0;
  std::vector<std::vector<Elem>> add;

  std::size_t order() const noexcept { return add.size(); }
};

/// Z_2, Z_3, Z_4 and Z_2 x Z_2, in that order.
std::vector<AbelianGroup> small_prime_power_groups();

struct BlockGroupStructure {
  AbelianGroup group;
  /// phi[i] maps the values of factor B_i (in the order of product_factors) to G.
  std::vector<std::map<Elem, Elem>> phi;
};

/// Searches groups of prime-power order and surjections phi_i: B_i -> G such
/// that R ∩ B = { x : sum phi_i(x_i) = 0 }. Requires a nontrivial product
/// block with factors of size at most 4.
std::optional<BlockGroupStructure> block_group_structure(const Relation& r, const Block& b);

/// True iff R is the intersection of the cylinders over its n-ary projections.
bool is_n_decomposable(const Relation& r, std::size_t n);

enum class Criticality { critical, not_critical, unknown };

struct CriticalityOptions {
  /// Whether the generators are known to generate the full polymorphism clone.
  bool generators_complete = false;
  std::uint64_t budget = 1'000'000;
};

/// Criticality via meet-irreducibility: R is critical iff it is essential and
/// the intersection of the invariant closures of R ∪ {t}, over all t ∉ R,
/// strictly contains R.
Criticality is_critical(const Relation& r, std::span<const Operation> generators,
                        const CriticalityOptions& options = {});

const char* to_string(Criticality c);

}  // namespace clonelab
