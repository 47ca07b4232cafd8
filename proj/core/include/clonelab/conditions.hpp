#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clonelab/ops.hpp"
#include "clonelab/rel.hpp"

namespace clonelab {

/// f_sigma ≈ g_pi with both maps into a shared set of r variables.
struct MinorIdentity {
  std::string lhs;
  VarMap lhs_map;
  std::string rhs;
  VarMap rhs_map;

  std::size_t variables() const noexcept { return lhs_map.target_arity; }
  friend bool operator==(const MinorIdentity&, const MinorIdentity&) = default;
};

/// A finite set of minor identities over declared function symbols.
class MinorCondition {
 public:
  MinorCondition() = default;
  MinorCondition(std::string name, std::vector<std::pair<std::string, std::size_t>> symbols,
                 std::vector<MinorIdentity> identities);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::pair<std::string, std::size_t>>& symbols() const noexcept {
    return symbols_;
  }
  const std::vector<MinorIdentity>& identities() const noexcept { return identities_; }
  std::size_t arity_of(std::string_view symbol) const;

  friend bool operator==(const MinorCondition&, const MinorCondition&) = default;

 private:
  std::string name_;
  std::vector<std::pair<std::string, std::size_t>> symbols_;
  std::vector<MinorIdentity> identities_;
};

namespace conditions {

/// c(x_1, ..., x_p) ≈ c(x_2, ..., x_p, x_1)
MinorCondition sigma_p(std::size_t p);
/// m(x,y,y) ≈ m(y,x,y) ≈ m(y,y,x) ≈ m(x,x,x)
MinorCondition quasi_minority();
/// m(x,y,y) ≈ m(y,y,x) ≈ m(x,x,x)
MinorCondition quasi_malcev();
/// m(x,y,y) ≈ m(y,x,y) ≈ m(y,y,x) ≈ m(y,y,y)
MinorCondition quasi_majority();
/// Invariance under the adjacent transpositions, which generate S_n.
MinorCondition fs(std::size_t n);
/// fs(n) plus f(x,x,y,z_4,...,z_n) ≈ f(x,y,y,z_4,...,z_n) for n >= 3. Together
/// they let any multiplicity pattern over a fixed value set reach any other.
MinorCondition ts(std::size_t n);
/// fs(n) plus f(x,x,x_3,...,x_n) ≈ f(y,y,x_3,...,x_n); n odd, n >= 3.
MinorCondition gm(std::size_t n);
/// w(x,...,x,y) ≈ w(x,...,y,x) ≈ ... ≈ w(y,x,...,x)
MinorCondition wnu(std::size_t n);
/// wnu(n) chained with ≈ w(x,...,x)
MinorCondition qnu(std::size_t n);

/// By CLI name: sigma_p, quasi_minority, quasi_malcev, quasi_majority, fs, ts,
/// gm, wnu, qnu. `param` is p or n where relevant.
MinorCondition builtin(std::string_view name, std::size_t param = 0);

}  // namespace conditions

using Assignment = std::map<std::string, Operation>;

struct Violation {
  std::size_t identity = 0;
  Tuple valuation;
  Elem lhs_value = 0;
  Elem rhs_value = 0;

  std::string describe(const MinorCondition& condition) const;
};

/// First failing identity and valuation (in index order), if any. Throws
/// InvalidArgument on missing symbols or arity/domain mismatch.
std::optional<Violation> find_violation(const Assignment& assignment,
                                        const MinorCondition& condition);

bool satisfies(const Assignment& assignment, const MinorCondition& condition);

/// Single-symbol convenience: binds `f` to the condition's only symbol.
bool satisfies(const Operation& f, const MinorCondition& condition);

struct WitnessSearch {
  std::optional<Assignment> witness;
  /// True when a witness was found or the candidate space was fully covered.
  bool definitive = false;
  std::uint64_t candidates_scanned = 0;
};

/// Search an explicit operation pool; every symbol may take any pool member
/// of matching arity.
WitnessSearch find_witness(std::span<const Operation> pool, const MinorCondition& condition,
                           std::uint64_t budget = 10'000'000);

/// Search polymorphisms of `structure`, enumerated over the given symmetry
/// class. A symmetry-reduced negative is only meaningful when the condition
/// forces that symmetry (e.g. cyclic for sigma_p); the caller decides.
WitnessSearch find_witness(const Structure& structure, Symmetry symmetry,
                           const MinorCondition& condition, std::uint64_t budget = 10'000'000);

}  // namespace clonelab
