#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "clonelab/conditions.hpp"
#include "clonelab/ops.hpp"
#include "clonelab/term.hpp"

namespace clonelab {

/// A constructed operation together with the term that produced it from the
/// named inputs. evaluate(term, inputs) == operation always holds.
struct Built {
  Operation operation;
  TermPtr term;
  Inputs inputs;
};

/// An input or output failed one of its defining conditions.
class ConditionFailure : public Error {
 public:
  ConditionFailure(std::string role, std::string condition, std::string detail);

  const std::string& role() const noexcept { return role_; }
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string role_;
  std::string condition_;
};

struct ConstructionOptions {
  /// Checks inputs against their conditions before building. Turning this off
  /// is unsafe: outputs of invalid inputs are meaningless. Postconditions are
  /// always verified.
  bool verify_preconditions = true;
};

/// Throws ConditionFailure naming `role`, the condition and the first bad valuation.
void require(const Operation& f, const MinorCondition& condition, const std::string& role);
void require_idempotent(const Operation& f, const std::string& role);

/// M(x,y,z) = c2(c3(M'(x,y,z), M'(y,z,x), M'(z,x,y)),
///               c3(M'(x,z,y), M'(z,y,x), M'(y,x,z)))
/// Inputs: an idempotent quasi majority M', a binary cyclic c2 and a ternary
/// cyclic c3. The result is a symmetric majority.
Built symmetrize_majority(const Operation& quasi_majority_op, const Operation& c2,
                          const Operation& c3, const ConstructionOptions& options = {});

/// m'(x,y,z) = M(d(x,y,z), d(y,z,x), d(z,x,y)) for a Mal'cev d and majority M.
Built minority_from_malcev_majority(const Operation& d, const Operation& majority,
                                   const ConstructionOptions& options = {});

/// The same symmetrization as symmetrize_majority applied to a minority.
Built symmetrize_minority(const Operation& minority, const Operation& c2, const Operation& c3,
                          const ConstructionOptions& options = {});

/// The common value of a symmetric ternary operation over E_3 on the six
/// permutations of (0,1,2).
Elem constant_of_symmetric(const Operation& m3, const ConstructionOptions& options = {});

/// The closed-form switch operation for constant c: first projection except
///   (c+2, c, c+1), (c+2, c+1, c) -> c+1  and  (c+1, c, c+2), (c+1, c+2, c) -> c+2.
Operation d_switch_closed_form(Elem c);

/// D(x,y,z) = m3(m3(x,y,z), y, z); verified against d_switch_closed_form.
Built d_switch(const Operation& m3, const ConstructionOptions& options = {});

/// Generalized minorities m_3, m_5, ..., m_{max_arity} over E_3 from a
/// symmetric minority m3 via
///   t(x) = m3(D(u, x1, x1), D(u, x1, x2), D(u, x1, x3)),  u = m_{n-2}(x1, x4, ..., xn)
///   m_n(x) = m3(t(x1,x2,x3,...), t(x2,x1,x3,...), t(x3,x1,x2,...))
/// Each m_n is verified against gm(n) and idempotency.
std::vector<Built> generalized_minority_chain(const Operation& m3, std::size_t max_arity,
                                              const ConstructionOptions& options = {});
Built generalized_minority(const Operation& m3, std::size_t n,
                           const ConstructionOptions& options = {});

/// m5(x1,x,x,x4,x5) = m3(x1,x4,x5): first failing valuation, if any.
std::optional<Tuple> star_one_violation(const Operation& m5, const Operation& m3);
/// m5(x1,x2,x3,x1,x2) = x3: first failing valuation, if any.
std::optional<Tuple> star_two_violation(const Operation& m5);

/// s_2 (the input) and s_3..s_max_arity over E_3 via
///   s_n(x) = m(s_{n-1}(x1, M(x1,x2,x3), x4..xn), s_{n-1}(x2, M(..), x4..), s_{n-1}(x3, M(..), x4..))
/// Each s_n is verified against ts(n) and the value-set properties.
std::vector<Built> totally_symmetric_chain(const Operation& m, const Operation& majority,
                                           const Operation& s2, std::size_t max_arity,
                                           const ConstructionOptions& options = {});

/// Checks the two value-set laws of a totally symmetric s_n over E_3:
/// on value set {a,b} it equals s2(a,b); on {0,1,2} it equals
/// m(s2(0,c), s2(1,c), s2(2,c)). Returns a description of the first failure.
std::optional<std::string> ts_property_violation(const Operation& sn, const Operation& s2,
                                                 const Operation& m, Elem c);

/// f = XOR over monomials of AND over the variables in each monomial.
struct PolyRep {
  std::size_t variable_count = 0;
  /// 1-based variable indices; sorted by size, then lexicographically.
  std::vector<std::vector<std::size_t>> monomials;

  friend bool operator==(const PolyRep&, const PolyRep&) = default;
};

/// Algebraic normal form of an idempotent Boolean operation (Moebius
/// transform over the subset lattice). Verified: reconstruction equals f,
/// odd monomial count, no constant monomial.
PolyRep poly_rep(const Operation& f);
Operation reconstruct(const PolyRep& rep);

/// Compatible totally symmetric and generalized minority chains over E_k.
struct SymmetricChainPair {
  std::size_t domain = 0;
  std::vector<Operation> ts_chain;  // s_2, s_3, ..., s_N
  std::vector<Operation> gm_chain;  // m_3, m_5, ..., m_M

  std::size_t max_ts_arity() const noexcept { return ts_chain.size() + 1; }
  std::size_t max_gm_arity() const noexcept { return 2 * gm_chain.size() + 1; }
  const Operation& s(std::size_t n) const;
  const Operation& m(std::size_t l) const;
};

struct ChainCheck {
  bool ok = true;
  std::string failure;
};

/// Verifies each s_n against ts(n) and each m_l against gm(l) plus idempotency,
/// then every identification law: identifying any two variables of s_n gives
/// s_{n-1} (s_1 = identity) and identifying any three variables of m_l gives
/// m_{l-2} (m_1 = identity).
ChainCheck verify_chain_compatibility(const SymmetricChainPair& chains);

/// xi(XOR_i AND W_i) = m_l(s_|W_1|(W_1), ..., s_|W_l|(W_l)) with s_1 and m_1
/// the identity. Chain compatibility is checked unless
/// options.verify_preconditions is false.
Built xi(const Operation& f, const SymmetricChainPair& chains,
         const ConstructionOptions& options = {});

}  // namespace clonelab
