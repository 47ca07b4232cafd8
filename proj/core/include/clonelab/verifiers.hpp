#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clonelab/constructions.hpp"
#include "clonelab/io.hpp"
#include "clonelab/rel.hpp"

namespace clonelab {

enum class Verdict { pass, fail, unknown };
const char* to_string(Verdict v);

/// fail always carries a counterexample in `details`; unknown carries the
/// exhausted budget.
struct VerifierResult {
  std::string name;
  Verdict verdict = Verdict::unknown;
  Json details = Json::object();
  double elapsed_seconds = 0;
};

Json to_json(const VerifierResult& r);

struct VerifyParams {
  std::size_t p = 3;
  std::size_t n = 3;
  /// Largest totally symmetric arity for ts-properties.
  std::size_t max_ts = 7;
  /// Structure for splitting-malcev, splitting-cycles, dichotomy.
  std::optional<Structure> structure;
  std::string structure_name;
  /// Generators for majority-search; empty means affine3, min3, maj3c0.
  std::vector<Operation> generators;
  /// Overrides the verifier's own budget: generated tables for
  /// majority-search (default 10^6), candidate scans elsewhere (default 10^7).
  std::optional<std::uint64_t> budget;
};

/// remark-cycles, star-identities, ts-properties, xi-homomorphism,
/// splitting-malcev, splitting-cycles, collapse-idemp, dichotomy,
/// baker-pixley-sample, block-structure, majority-search.
const std::vector<std::string>& verifier_names();

/// Throws InvalidArgument for an unknown name or bad parameters.
VerifierResult verify(const std::string& name, const VerifyParams& params);

/// The E_3 pipeline: d = x - y + z mod 3, M' = dual discriminator, c2 = min,
/// c3 = symmetric majority with rainbow value 0.
struct E3Pipeline {
  Operation malcev;
  Operation quasi_majority;
  Operation c2;
  Operation c3;
  Built minority;            // m'_3
  Built majority;            // M, symmetric
  Built symmetric_minority;  // m_3^c
  Elem constant = 0;         // rainbow value of m_3^c
  Built d_switch;
};

E3Pipeline build_e3_pipeline();

/// s_2..s_max_ts from (m_3^c, M, c2) and m_3..m_max_gm from m_3^c.
SymmetricChainPair build_e3_chains(const E3Pipeline& pipeline, std::size_t max_ts,
                                   std::size_t max_gm);

}  // namespace clonelab
