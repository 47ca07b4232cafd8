#pragma once

#include <string>

#include "json.hpp"

#include "clonelab/conditions.hpp"
#include "clonelab/constructions.hpp"
#include "clonelab/ops.hpp"
#include "clonelab/ppcon.hpp"
#include "clonelab/rel.hpp"
#include "clonelab/term.hpp"

namespace clonelab {

/// Key order is preserved so that parse/serialize round-trips byte for byte.
using Json = nlohmann::ordered_json;

// Every *_from_json throws InvalidArgument on malformed or out-of-range input.

/// {"domain":k,"arity":n,"table":[...]}
Json to_json(const Operation& f);
Operation operation_from_json(const Json& j);

/// {"from":n,"to":r,"map":[...]} (0-based)
Json to_json(const VarMap& m);
VarMap varmap_from_json(const Json& j);

/// {"domain":k,"arity":m,"tuples":[[...],...]} (tuples sorted)
Json to_json(const Relation& r);
Relation relation_from_json(const Json& j);

/// {"domain":k,"relations":{"name":Relation,...}}
Json to_json(const Structure& s);
Structure structure_from_json(const Json& j);

/// {"name":..,"symbols":{"f":n,...},"identities":[{"variables":r,"lhs":["f",[..]],"rhs":["g",[..]]}]}
Json to_json(const MinorCondition& c);
MinorCondition condition_from_json(const Json& j);

/// {"free":n,"exists":m,"atoms":[["R",[0,3,1]],...],"eq":[[0,2],...]}
Json to_json(const PPFormula& phi);
PPFormula ppformula_from_json(const Json& j);

/// {"op":"input","name":..,"arity":n} | {"op":"projection","arity":n,"index":i}
/// | {"op":"minor","of":Term,"map":VarMap} | {"op":"compose","head":Term,"args":[Term,...]}
Json to_json(const TermPtr& t);
TermPtr term_from_json(const Json& j);

/// {"map":[...]}
Json to_json(const Homomorphism& h);
Homomorphism homomorphism_from_json(const Json& j);

/// {"variables":n,"monomials":[[1,2],...]}
Json to_json(const PolyRep& p);
PolyRep polyrep_from_json(const Json& j);

/// {"symbol":Operation,...}
Json to_json(const Assignment& a);
Assignment assignment_from_json(const Json& j);

// Reports (serialization only).
Json to_json(const Built& b);
Json to_json(const Violation& v, const MinorCondition& c);
Json to_json(const WitnessSearch& w);
Json to_json(const Block& b);
Json to_json(const BlockGroupStructure& g);
Json to_json(const Core& c);
Json to_json(const FreeStructureReport& r);
Json to_json(const Dichotomy& d);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Compact single-line serialization (the canonical form for round trips).
std::string dump(const Json& j);

}  // namespace clonelab
