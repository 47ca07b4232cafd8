#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clonelab/ops.hpp"
#include "clonelab/rel.hpp"

namespace clonelab {

/// A map between the domains of two structures. map[a] is the image of a.
struct Homomorphism {
  std::vector<Elem> map;

  friend bool operator==(const Homomorphism&, const Homomorphism&) = default;
};

/// Throws InvalidArgument unless both structures have the same relation names
/// with the same arities (in any order).
void require_same_signature(const Structure& a, const Structure& b);

/// First tuple of `a` (relation name and tuple) whose image leaves `b`.
std::optional<std::pair<std::string, Tuple>> homomorphism_violation(const Structure& a,
                                                                    const Structure& b,
                                                                    const Homomorphism& h);
bool is_homomorphism(const Structure& a, const Structure& b, const Homomorphism& h);

struct HomSearchOptions {
  /// Permutes the value order tried at each branch; verdicts do not depend on it.
  std::optional<std::uint64_t> seed;
};

/// Backtracking with generalized arc consistency; variables ordered by degree.
/// Without a seed the result is the first solution in lexicographic branch order.
std::optional<Homomorphism> find_homomorphism(const Structure& a, const Structure& b,
                                              const HomSearchOptions& options = {});

struct HomEquivalence {
  std::optional<Homomorphism> forward;   // a -> b
  std::optional<Homomorphism> backward;  // b -> a

  bool equivalent() const noexcept { return forward && backward; }
};

HomEquivalence hom_equivalent(const Structure& a, const Structure& b,
                              const HomSearchOptions& options = {});

struct Core {
  Structure structure;
  /// Elements of the original structure kept, ascending; element i of the
  /// core is elements[i].
  std::vector<Elem> elements;
  /// Retraction onto the core, in core labels; identity on `elements`.
  Homomorphism retraction;
};

/// Removes elements greedily, largest index first, while the structure still
/// maps into the remainder. The result has no non-surjective endomorphism.
Core core_of(const Structure& a);

/// Adds the unary relation {a} for every element a under a fresh name.
Structure expand_by_singletons(const Structure& c);

/// Name given to {a} by expand_by_singletons when it does not collide.
std::string singleton_name(Elem a);

/// exists y_0..y_{exists-1} . AND atoms AND equalities. Variables 0..free-1 are
/// free; free..free+exists-1 are existential.
struct PPFormula {
  std::size_t free = 0;
  std::size_t exists = 0;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> atoms;
  std::vector<std::pair<std::size_t, std::size_t>> eq;

  friend bool operator==(const PPFormula&, const PPFormula&) = default;
};

/// Checks variable ranges and atom arities against `a`.
void validate(const PPFormula& phi, const Structure& a);

/// Set of free-variable assignments satisfying phi over `a`.
Relation evaluate(const PPFormula& phi, const Structure& a,
                  std::uint64_t cap = 100'000'000);

/// The structure on A^n (tuples encoded most significant coordinate first)
/// whose relations are the given formulas. A formula with r*n free variables
/// defines an r-ary relation.
Structure pp_power(const Structure& a, std::size_t n,
                   const std::vector<std::pair<std::string, PPFormula>>& defs,
                   std::uint64_t cap = 100'000'000);

/// A free structure built from the polymorphisms of A, the small template it
/// is compared with, and the homomorphisms both ways when they exist.
struct FreeStructureReport {
  Structure constructed{1};
  Structure target{1};
  /// target -> constructed
  std::optional<Homomorphism> from_target;
  /// constructed -> target
  std::optional<Homomorphism> to_target;
  bool polymorphisms_complete = false;
  /// A polymorphism satisfying the condition that blocks the construction.
  std::optional<Operation> condition_witness;
  /// Cyclic construction only: classes[i] lists the element ids of F_i.
  std::vector<std::vector<Elem>> classes;

  bool hom_equivalent() const noexcept { return from_target && to_target; }
};

/// Element id of an operation in A^{|A|^n}: its table read as a base-|A| number.
Elem operation_id(const Operation& f);
Operation operation_of_id(std::size_t k, std::size_t n, Elem id);

/// The structure on A^{|A|^2} with R = {(w(x,x,y), w(y,x,x)) : w in pol3}
/// and the singletons c0 = {pr_2}, c1 = {pr_1}; compared with B_2.
FreeStructureReport free_structure_malcev(const Structure& a, const std::vector<Operation>& pol3,
                                          bool complete);

/// The structure on A^{|A|^p} with R = {(f, f(x_2..x_p,x_1)) : f in polp};
/// compared with C_p. Classes F_i = shifts by i of the least table in each
/// shift orbit.
FreeStructureReport free_structure_cycle(const Structure& a, std::size_t p,
                                         const std::vector<Operation>& polp, bool complete);

struct Dichotomy {
  enum class Branch { c1_constructs_a, a_constructs_i2 };
  Branch branch;
  Core core;
  /// c1 branch: the one-element pp-power of C_1 with A's signature.
  /// i2 branch: S = (B; c0 = {b0}, c1 = {b1}) over the expanded core B.
  Structure witness{1};
  /// c1 branch: witness -> A and A -> witness.
  /// i2 branch: g: S -> I_2 and h: I_2 -> S.
  std::optional<Homomorphism> there;
  std::optional<Homomorphism> back;

  bool verified() const noexcept { return there && back; }
};

Dichotomy verify_dichotomy_c1_i2(const Structure& a);

const char* to_string(Dichotomy::Branch b);

}  // namespace clonelab
