#include "clonelab/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace clonelab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw InvalidArgument(std::string("expected an object with '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t natural(const Json& j, const char* what) {
  if (!j.is_number_unsigned()) throw InvalidArgument(std::string(what) + " must be a natural number");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array");
  return j;
}

std::vector<std::size_t> naturals(const Json& j, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& x : array(j, what)) out.push_back(natural(x, what));
  return out;
}

Tuple tuple_from(const Json& j) {
  Tuple t;
  for (const auto& x : array(j, "tuple")) {
    const std::size_t v = natural(x, "tuple entry");
    if (v > 0xffffffffu) throw InvalidArgument("tuple entry too large");
    t.push_back(static_cast<Elem>(v));
  }
  return t;
}

Json tuple_json(const Tuple& t) {
  Json out = Json::array();
  for (Elem v : t) out.push_back(v);
  return out;
}

}  // namespace

Json to_json(const Operation& f) {
  Json table = Json::array();
  for (auto v : f.table()) table.push_back(static_cast<unsigned>(v));
  return Json{{"domain", f.domain()}, {"arity", f.arity()}, {"table", std::move(table)}};
}

Operation operation_from_json(const Json& j) {
  const std::size_t k = natural(field(j, "domain"), "domain");
  const std::size_t n = natural(field(j, "arity"), "arity");
  std::vector<std::uint8_t> table;
  for (std::size_t v : naturals(field(j, "table"), "table")) {
    if (v >= k) throw InvalidArgument("table entry out of range");
    table.push_back(static_cast<std::uint8_t>(v));
  }
  return Operation(k, n, std::move(table));
}

Json to_json(const VarMap& m) {
  Json map = Json::array();
  for (auto v : m.map) map.push_back(v);
  return Json{{"from", m.source_arity()}, {"to", m.target_arity}, {"map", std::move(map)}};
}

VarMap varmap_from_json(const Json& j) {
  const std::size_t from = natural(field(j, "from"), "from");
  const std::size_t to = natural(field(j, "to"), "to");
  auto map = naturals(field(j, "map"), "map");
  if (map.size() != from) throw InvalidArgument("map length differs from 'from'");
  return VarMap(to, std::move(map));
}

Json to_json(const Relation& r) {
  Json tuples = Json::array();
  for (const auto& t : r.tuples()) tuples.push_back(tuple_json(t));
  return Json{{"domain", r.domain()}, {"arity", r.arity()}, {"tuples", std::move(tuples)}};
}

Relation relation_from_json(const Json& j) {
  const std::size_t k = natural(field(j, "domain"), "domain");
  const std::size_t m = natural(field(j, "arity"), "arity");
  std::vector<Tuple> tuples;
  for (const auto& t : array(field(j, "tuples"), "tuples")) tuples.push_back(tuple_from(t));
  return Relation(k, m, std::move(tuples));
}

Json to_json(const Structure& s) {
  Json rels = Json::object();
  for (const auto& [name, r] : s.relations()) rels[name] = to_json(r);
  return Json{{"domain", s.domain()}, {"relations", std::move(rels)}};
}

Structure structure_from_json(const Json& j) {
  Structure s(natural(field(j, "domain"), "domain"));
  const Json& rels = field(j, "relations");
  if (!rels.is_object()) throw InvalidArgument("relations must be an object");
  for (const auto& [name, r] : rels.items()) s.add(name, relation_from_json(r));
  return s;
}

Json to_json(const MinorCondition& c) {
  Json symbols = Json::object();
  for (const auto& [name, arity] : c.symbols()) symbols[name] = arity;
  Json ids = Json::array();
  for (const auto& id : c.identities()) {
    ids.push_back(Json{{"variables", id.variables()},
                       {"lhs", Json::array({id.lhs, id.lhs_map.map})},
                       {"rhs", Json::array({id.rhs, id.rhs_map.map})}});
  }
  return Json{{"name", c.name()}, {"symbols", std::move(symbols)}, {"identities", std::move(ids)}};
}

MinorCondition condition_from_json(const Json& j) {
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw InvalidArgument("name must be a string");
    name = j["name"].get<std::string>();
  }
  const Json& syms = field(j, "symbols");
  if (!syms.is_object()) throw InvalidArgument("symbols must be an object");
  std::vector<std::pair<std::string, std::size_t>> symbols;
  for (const auto& [s, arity] : syms.items()) symbols.emplace_back(s, natural(arity, "arity"));
  std::vector<MinorIdentity> ids;
  for (const auto& id : array(field(j, "identities"), "identities")) {
    auto raw = [&](const char* key) {
      const Json& s = field(id, key);
      if (!s.is_array() || s.size() != 2 || !s[0].is_string()) {
        throw InvalidArgument(std::string(key) + " must be [symbol, map]");
      }
      return std::make_pair(s[0].get<std::string>(), naturals(s[1], "map"));
    };
    const auto lhs = raw("lhs");
    const auto rhs = raw("rhs");
    // Without an explicit count, the shared variables are those the maps mention.
    std::size_t vars = 0;
    if (id.contains("variables")) {
      vars = natural(id["variables"], "variables");
    } else {
      for (const auto* m : {&lhs.second, &rhs.second}) {
        for (auto v : *m) vars = std::max<std::size_t>(vars, v + 1);
      }
    }
    auto side = [&](const std::pair<std::string, std::vector<std::size_t>>& s) {
      return std::make_pair(s.first, VarMap(vars, s.second));
    };
    auto [l, lm] = side(lhs);
    auto [r, rm] = side(rhs);
    ids.push_back({std::move(l), std::move(lm), std::move(r), std::move(rm)});
  }
  return MinorCondition(std::move(name), std::move(symbols), std::move(ids));
}

Json to_json(const PPFormula& phi) {
  Json atoms = Json::array();
  for (const auto& [name, args] : phi.atoms) atoms.push_back(Json::array({name, args}));
  Json eq = Json::array();
  for (const auto& [x, y] : phi.eq) eq.push_back(Json::array({x, y}));
  return Json{
      {"free", phi.free}, {"exists", phi.exists}, {"atoms", std::move(atoms)}, {"eq", std::move(eq)}};
}

PPFormula ppformula_from_json(const Json& j) {
  PPFormula phi;
  phi.free = natural(field(j, "free"), "free");
  phi.exists = natural(field(j, "exists"), "exists");
  for (const auto& a : array(field(j, "atoms"), "atoms")) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_string()) {
      throw InvalidArgument("atom must be [relation, variables]");
    }
    phi.atoms.emplace_back(a[0].get<std::string>(), naturals(a[1], "atom variables"));
  }
  if (j.contains("eq")) {
    for (const auto& e : array(j["eq"], "eq")) {
      auto xy = naturals(e, "equality");
      if (xy.size() != 2) throw InvalidArgument("equality must have two variables");
      phi.eq.emplace_back(xy[0], xy[1]);
    }
  }
  return phi;
}

Json to_json(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::input:
      return Json{{"op", "input"}, {"name", t->name()}, {"arity", t->arity()}};
    case Term::Kind::projection:
      return Json{{"op", "projection"}, {"arity", t->arity()}, {"index", t->index()}};
    case Term::Kind::minor:
      return Json{{"op", "minor"}, {"of", to_json(t->head())}, {"map", to_json(t->map())}};
    case Term::Kind::compose: {
      Json args = Json::array();
      for (const auto& a : t->args()) args.push_back(to_json(a));
      return Json{{"op", "compose"}, {"head", to_json(t->head())}, {"args", std::move(args)}};
    }
  }
  throw Error("unreachable term kind");
}

TermPtr term_from_json(const Json& j) {
  const Json& op = field(j, "op");
  if (!op.is_string()) throw InvalidArgument("term op must be a string");
  const auto kind = op.get<std::string>();
  if (kind == "input") {
    const Json& name = field(j, "name");
    if (!name.is_string()) throw InvalidArgument("input name must be a string");
    return Term::input(name.get<std::string>(), natural(field(j, "arity"), "arity"));
  }
  if (kind == "projection") {
    return Term::projection(natural(field(j, "arity"), "arity"), natural(field(j, "index"), "index"));
  }
  if (kind == "minor") {
    return Term::minor(term_from_json(field(j, "of")), varmap_from_json(field(j, "map")));
  }
  if (kind == "compose") {
    std::vector<TermPtr> args;
    for (const auto& a : array(field(j, "args"), "args")) args.push_back(term_from_json(a));
    return Term::compose(term_from_json(field(j, "head")), std::move(args));
  }
  throw InvalidArgument("unknown term op '" + kind + "'");
}

Json to_json(const Homomorphism& h) { return Json{{"map", tuple_json(h.map)}}; }

Homomorphism homomorphism_from_json(const Json& j) { return {tuple_from(field(j, "map"))}; }

Json to_json(const PolyRep& p) {
  Json monomials = Json::array();
  for (const auto& w : p.monomials) monomials.push_back(w);
  return Json{{"variables", p.variable_count}, {"monomials", std::move(monomials)}};
}

PolyRep polyrep_from_json(const Json& j) {
  PolyRep p;
  p.variable_count = natural(field(j, "variables"), "variables");
  for (const auto& w : array(field(j, "monomials"), "monomials")) {
    p.monomials.push_back(naturals(w, "monomial"));
  }
  return p;
}

Json to_json(const Assignment& a) {
  Json out = Json::object();
  for (const auto& [name, op] : a) out[name] = to_json(op);
  return out;
}

Assignment assignment_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("assignment must be an object");
  Assignment a;
  for (const auto& [name, op] : j.items()) a.emplace(name, operation_from_json(op));
  return a;
}

Json to_json(const Built& b) {
  Json inputs = Json::object();
  for (const auto& [name, op] : b.inputs) inputs[name] = to_json(op);
  return Json{{"operation", to_json(b.operation)}, {"term", to_json(b.term)}, {"inputs", inputs}};
}

Json to_json(const Violation& v, const MinorCondition& c) {
  const auto& id = c.identities().at(v.identity);
  return Json{{"identity", v.identity},
              {"lhs", id.lhs},
              {"rhs", id.rhs},
              {"valuation", tuple_json(v.valuation)},
              {"lhs_value", v.lhs_value},
              {"rhs_value", v.rhs_value},
              {"description", v.describe(c)}};
}

Json to_json(const WitnessSearch& w) {
  Json out{{"found", w.witness.has_value()},
           {"definitive", w.definitive},
           {"candidates_scanned", w.candidates_scanned}};
  if (w.witness) out["witness"] = to_json(*w.witness);
  return out;
}

Json to_json(const Block& b) {
  Json members = Json::array();
  for (const auto& t : b.members) members.push_back(tuple_json(t));
  Json out{{"members", std::move(members)}, {"trivial", b.is_trivial}};
  if (b.product_factors) {
    Json factors = Json::array();
    for (const auto& f : *b.product_factors) factors.push_back(tuple_json(f));
    out["product_factors"] = std::move(factors);
  } else {
    out["product_factors"] = nullptr;
  }
  return out;
}

Json to_json(const BlockGroupStructure& g) {
  Json phi = Json::array();
  for (const auto& m : g.phi) {
    Json pairs = Json::array();
    for (const auto& [x, y] : m) pairs.push_back(Json::array({x, y}));
    phi.push_back(std::move(pairs));
  }
  return Json{{"group", g.group.name}, {"order", g.group.order()}, {"phi", std::move(phi)}};
}

Json to_json(const Core& c) {
  return Json{{"structure", to_json(c.structure)},
              {"elements", tuple_json(c.elements)},
              {"retraction", to_json(c.retraction)}};
}

Json to_json(const FreeStructureReport& r) {
  Json out{{"constructed", to_json(r.constructed)},
           {"target", to_json(r.target)},
           {"from_target", r.from_target ? to_json(*r.from_target) : Json(nullptr)},
           {"to_target", r.to_target ? to_json(*r.to_target) : Json(nullptr)},
           {"hom_equivalent", r.hom_equivalent()},
           {"polymorphisms_complete", r.polymorphisms_complete},
           {"condition_witness",
            r.condition_witness ? to_json(*r.condition_witness) : Json(nullptr)}};
  if (!r.classes.empty()) {
    Json classes = Json::array();
    for (const auto& c : r.classes) classes.push_back(tuple_json(c));
    out["classes"] = std::move(classes);
  }
  return out;
}

Json to_json(const Dichotomy& d) {
  return Json{{"branch", to_string(d.branch)},
              {"core", to_json(d.core)},
              {"witness", to_json(d.witness)},
              {"there", d.there ? to_json(*d.there) : Json(nullptr)},
              {"back", d.back ? to_json(*d.back) : Json(nullptr)},
              {"verified", d.verified()}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace clonelab
