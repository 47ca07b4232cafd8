#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "clonelab/conditions.hpp"
#include "clonelab/constructions.hpp"
#include "clonelab/fixtures.hpp"
#include "clonelab/io.hpp"
#include "clonelab/ops.hpp"
#include "clonelab/ppcon.hpp"
#include "clonelab/rel.hpp"
#include "clonelab/verifiers.hpp"

#ifndef CLONELAB_FIXTURES_DIR
#define CLONELAB_FIXTURES_DIR "fixtures"
#endif

namespace fs = std::filesystem;

namespace clonelab::cli {

std::string default_fixtures_dir() { return CLONELAB_FIXTURES_DIR; }

namespace {

struct Outcome {
  int code = ok;
  std::string summary;
  Json body = Json::object();
};

struct Globals {
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::string fixtures = default_fixtures_dir();
};

bool is_file(const std::string& path) {
  std::error_code ec;
  return fs::is_regular_file(path, ec);
}

std::string strip_json(std::string s) {
  if (s.size() > 5 && s.ends_with(".json")) s.resize(s.size() - 5);
  return s;
}

// Operations: a JSON file, a file under <fixtures>/ops, or a catalog name.
Operation load_op(const std::string& ref, const Globals& g) {
  if (is_file(ref)) return operation_from_json(read_json_file(ref));
  const std::string name = strip_json(fs::path(ref).filename().string());
  const std::string shipped = (fs::path(g.fixtures) / "ops" / (name + ".json")).string();
  if (is_file(shipped)) return operation_from_json(read_json_file(shipped));
  return catalog::by_name(name);
}

std::vector<Operation> load_ops(const std::vector<std::string>& specs, const Globals& g) {
  std::vector<Operation> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(load_op(s, g));
  return out;
}

Structure load_structure(const std::string& ref, const Globals& g) {
  if (is_file(ref)) return structure_from_json(read_json_file(ref));
  const std::string name = strip_json(ref);
  const std::string shipped = (fs::path(g.fixtures) / (name + ".json")).string();
  if (is_file(shipped)) return structure_from_json(read_json_file(shipped));
  return fixtures::by_name(name);
}

std::vector<Tuple> parse_tuples(const std::string& text) {
  std::vector<Tuple> out;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    Tuple t;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if (cell.empty()) continue;
      try {
        t.push_back(static_cast<Elem>(std::stoul(cell)));
      } catch (const std::exception&) {
        throw InvalidArgument("bad tuple entry '" + cell + "'");
      }
    }
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& t : parse_tuples(text)) out.insert(out.end(), t.begin(), t.end());
  return out;
}

struct RelationArgs {
  std::string relation;
  std::string tuples;
  std::size_t domain = 0;

  void attach(CLI::App* sub) {
    sub->add_option("--relation", relation,
                    "Relation JSON file or <structure>:<relation name>");
    sub->add_option("--tuples", tuples, "Inline tuples, e.g. 0,1;1,0");
    sub->add_option("--domain", domain, "Domain size for --tuples");
  }

  Relation load(const Globals& g) const {
    if (!tuples.empty()) {
      const auto ts = parse_tuples(tuples);
      if (ts.empty()) throw InvalidArgument("--tuples is empty");
      std::size_t k = domain;
      if (k == 0) {
        for (const auto& t : ts)
          for (Elem e : t) k = std::max<std::size_t>(k, e + 1);
      }
      return Relation(k, ts.front().size(), ts);
    }
    if (relation.empty()) throw InvalidArgument("give --relation or --tuples");
    if (is_file(relation)) return relation_from_json(read_json_file(relation));
    const auto colon = relation.find(':');
    if (colon == std::string::npos) {
      throw InvalidArgument("no relation file '" + relation + "'");
    }
    const Structure s = load_structure(relation.substr(0, colon), g);
    return s.at(relation.substr(colon + 1));
  }
};

MinorCondition load_condition(const std::string& ref, std::size_t p, std::size_t n) {
  if (is_file(ref)) return condition_from_json(read_json_file(ref));
  return conditions::builtin(ref, ref == "sigma_p" ? p : n);
}

Symmetry parse_symmetry(const std::string& s) {
  if (s == "none") return Symmetry::none;
  if (s == "cyclic") return Symmetry::cyclic;
  if (s == "fully_symmetric" || s == "fs") return Symmetry::fully_symmetric;
  throw InvalidArgument("unknown symmetry '" + s + "'");
}

Symmetry default_symmetry(const MinorCondition& c) {
  const auto& n = c.name();
  if (n.starts_with("sigma_p")) return Symmetry::cyclic;
  if (n.starts_with("fs") || n.starts_with("ts") || n.starts_with("gm")) {
    return Symmetry::fully_symmetric;
  }
  return Symmetry::none;
}

Json ops_json(const std::vector<Operation>& ops) {
  Json arr = Json::array();
  for (const auto& f : ops) arr.push_back(to_json(f));
  return arr;
}

Json tuples_json(const std::vector<Tuple>& ts) {
  Json arr = Json::array();
  for (const auto& t : ts) arr.push_back(Json(t));
  return arr;
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(3) << s << " s";
  return o.str();
}

Outcome built_outcome(const Built& b, const std::string& what) {
  return {ok, what + ": arity " + std::to_string(b.operation.arity()) + ", " +
                  std::to_string(node_count(b.term)) + " term nodes",
          to_json(b)};
}

using Handler = std::function<Outcome()>;

class Cli {
 public:
  explicit Cli(Globals& g) : g_(g), app_("Finite clones, minor conditions and pp-constructions",
                                         "clonelab") {
    app_.require_subcommand(1);
    app_.fallthrough();
    app_.add_flag("--json", g_.json, "Print compact JSON instead of text");
    app_.add_option("--seed", g_.seed, "Seed for randomized search orderings");
    app_.add_option("--budget", g_.budget, "Search or generation budget");
    app_.add_option("--fixtures", g_.fixtures, "Fixture directory");
    add_op();
    add_check();
    add_pol();
    add_invclosure();
    add_relation_queries();
    add_hom();
    add_core();
    add_pppower();
    add_construct();
    add_free();
    add_verify();
  }

  CLI::App& app() { return app_; }

  std::optional<Outcome> dispatch() {
    for (auto& [sub, handler] : handlers_) {
      if (sub->parsed()) return handler();
    }
    return std::nullopt;
  }

 private:
  CLI::App* command(CLI::App* parent, const std::string& name, const std::string& desc,
                    Handler handler) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->fallthrough();
    handlers_.emplace_back(sub, std::move(handler));
    return sub;
  }

  void add_op() {
    auto* op = app_.add_subcommand("op", "Minors, compositions and projections");
    op->require_subcommand(1);
    op->fallthrough();

    auto* minor_cmd = command(op, "minor", "f_sigma for a variable map sigma", [this] {
      const Operation f = load_op(s_.op, g_);
      const VarMap sigma(n_.to, parse_list(s_.map));
      const Operation h = minor(f, sigma);
      return Outcome{ok, "minor of arity " + std::to_string(h.arity()), to_json(h)};
    });
    minor_cmd->add_option("--op", s_.op, "Operation")->required();
    minor_cmd->add_option("--map", s_.map, "0-based images, e.g. 0,0,1")->required();
    minor_cmd->add_option("--to", n_.to, "Target arity")->required();

    auto* compose_cmd = command(op, "compose", "f(g_1, ..., g_n)", [this] {
      const Operation f = load_op(s_.op, g_);
      const auto gs = load_ops(v_.args, g_);
      const Operation h = compose(f, gs);
      return Outcome{ok, "composition of arity " + std::to_string(h.arity()), to_json(h)};
    });
    compose_cmd->add_option("--head", s_.op, "Outer operation")->required();
    compose_cmd->add_option("--args", v_.args, "Inner operations")->required();

    auto* project_cmd = command(op, "project", "The i-th n-ary projection", [this] {
      const Operation h = make_projection(n_.domain, n_.arity, n_.index);
      return Outcome{ok, "projection", to_json(h)};
    });
    project_cmd->add_option("--domain", n_.domain)->required();
    project_cmd->add_option("--arity", n_.arity)->required();
    project_cmd->add_option("--index", n_.index, "0-based")->required();
  }

  void add_check() {
    auto* sub = command(&app_, "check", "Check a minor condition", [this] {
      const MinorCondition c = load_condition(s_.condition, n_.p, n_.n);
      if (!v_.ops.empty()) return check_ops(c);
      if (s_.structure.empty()) throw InvalidArgument("give --ops or --structure");
      return check_structure(c);
    });
    sub->add_option("condition", s_.condition, "Builtin name or condition JSON file")
        ->required();
    sub->add_option("--p", n_.p, "p for sigma_p");
    sub->add_option("--n", n_.n, "Arity for fs, ts, gm, wnu, qnu");
    sub->add_option("--ops", v_.ops, "Operations bound to the symbols, optionally sym=op");
    sub->add_option("--structure", s_.structure, "Search Pol of this structure");
    sub->add_option("--symmetry", s_.symmetry, "none, cyclic or fully_symmetric");
  }

  Outcome check_ops(const MinorCondition& c) {
    Assignment a;
    std::size_t next = 0;
    for (const auto& ref : v_.ops) {
      const auto eq = ref.find('=');
      if (eq != std::string::npos) {
        a.insert_or_assign(ref.substr(0, eq), load_op(ref.substr(eq + 1), g_));
        continue;
      }
      if (next >= c.symbols().size()) throw InvalidArgument("more operations than symbols");
      a.insert_or_assign(c.symbols()[next++].first, load_op(ref, g_));
    }
    const auto v = find_violation(a, c);
    Json body{{"condition", c.name()}, {"satisfied", !v.has_value()}};
    if (v) {
      body["counterexample"] = to_json(*v, c);
      return {counterexample, v->describe(c), body};
    }
    return {ok, c.name() + ": satisfied", body};
  }

  Outcome check_structure(const MinorCondition& c) {
    const Structure s = load_structure(s_.structure, g_);
    const Symmetry sym = s_.symmetry.empty() ? default_symmetry(c) : parse_symmetry(s_.symmetry);
    const std::uint64_t budget = g_.budget.value_or(OperationSpace::default_cap);
    const auto w = find_witness(s, sym, c, budget);
    Json body{{"condition", c.name()}, {"search", to_json(w)}};
    if (w.witness) return {ok, c.name() + ": witness found", body};
    if (!w.definitive) {
      body["budget"] = budget;
      return {usage, c.name() + ": budget exhausted", body};
    }
    body["counterexample"] = "no polymorphism satisfies the condition";
    return {counterexample,
            c.name() + ": no witness among " + std::to_string(w.candidates_scanned) +
                " candidates",
            body};
  }

  void add_pol() {
    auto* sub = command(&app_, "pol", "Polymorphisms of a structure at one arity", [this] {
      const Structure s = load_structure(s_.structure, g_);
      PolOptions o;
      if (!s_.symmetry.empty()) o.symmetry = parse_symmetry(s_.symmetry);
      if (g_.budget) o.cap = *g_.budget;
      const auto ops = pol(s, n_.arity, o);
      return Outcome{ok, std::to_string(ops.size()) + " polymorphisms",
                     Json{{"count", ops.size()}, {"operations", ops_json(ops)}}};
    });
    sub->add_option("--structure", s_.structure)->required();
    sub->add_option("--arity", n_.arity)->required();
    sub->add_option("--symmetry", s_.symmetry, "none, cyclic or fully_symmetric");
  }

  void add_invclosure() {
    auto* sub = command(&app_, "invclosure", "Invariant relation generated by tuples", [this] {
      const auto gens = load_ops(v_.ops, g_);
      const auto seed = parse_tuples(s_.tuples);
      if (seed.empty()) throw InvalidArgument("--tuples is empty");
      const std::size_t k = gens.front().domain();
      const std::size_t m = seed.front().size();
      if (g_.budget) {
        auto r = inv_closure_bounded(k, gens, seed, m, *g_.budget);
        if (!r) {
          return Outcome{usage, "budget exhausted", Json{{"budget", *g_.budget}}};
        }
        return Outcome{ok, std::to_string(r->size()) + " tuples", to_json(*r)};
      }
      const Relation r = inv_closure(k, gens, seed, m);
      return Outcome{ok, std::to_string(r.size()) + " tuples", to_json(r)};
    });
    sub->add_option("--ops", v_.ops, "Generators")->required();
    sub->add_option("--tuples", s_.tuples, "Seed tuples, e.g. 0,1;1,0")->required();
  }

  void add_relation_queries() {
    auto* ess = command(&app_, "essential", "Essential tuples of a relation", [this] {
      const Relation r = rel_.load(g_);
      const auto ts = essential_tuples(r);
      return Outcome{ok, ts.empty() ? "not essential" : "essential",
                     Json{{"essential", !ts.empty()}, {"tuples", tuples_json(ts)}}};
    });
    rel_.attach(ess);

    auto* blk = command(&app_, "blocks", "Blocks of R and Ess(R)", [this] {
      const Relation r = rel_.load(g_);
      Json arr = Json::array();
      std::size_t nontrivial = 0;
      for (const auto& b : blocks(r)) {
        Json j = to_json(b);
        if (!b.is_trivial) ++nontrivial;
        if (!b.is_trivial && b.product_factors) {
          try {
            const auto gs = block_group_structure(r, b);
            j["group_structure"] = gs ? to_json(*gs) : Json(nullptr);
          } catch (const InvalidArgument&) {
            j["group_structure"] = nullptr;
          }
        }
        arr.push_back(std::move(j));
      }
      return Outcome{ok,
                     std::to_string(arr.size()) + " blocks, " + std::to_string(nontrivial) +
                         " nontrivial",
                     Json{{"blocks", arr}}};
    });
    rel_.attach(blk);

    auto* crit = command(&app_, "critical", "Criticality of a relation", [this] {
      const Relation r = rel_.load(g_);
      const auto gens = load_ops(v_.ops, g_);
      CriticalityOptions o;
      o.generators_complete = flag_complete_;
      if (g_.budget) o.budget = *g_.budget;
      const Criticality c = is_critical(r, gens, o);
      return Outcome{ok, to_string(c), Json{{"verdict", to_string(c)}}};
    });
    rel_.attach(crit);
    crit->add_option("--ops", v_.ops, "Generators of the clone")->required();
    crit->add_flag("--complete", flag_complete_, "The generators generate all of Pol");

    auto* dec = command(&app_, "decomposable", "n-decomposability of a relation", [this] {
      const Relation r = rel_.load(g_);
      const bool d = is_n_decomposable(r, n_.n);
      return Outcome{ok, std::string(d ? "" : "not ") + std::to_string(n_.n) + "-decomposable",
                     Json{{"n", n_.n}, {"decomposable", d}}};
    });
    rel_.attach(dec);
    dec->add_option("--n", n_.n)->required();
  }

  void add_hom() {
    auto* sub = command(&app_, "hom", "Find a homomorphism", [this] {
      const Structure a = load_structure(s_.from, g_);
      const Structure b = load_structure(s_.to, g_);
      HomSearchOptions o;
      o.seed = g_.seed;
      const auto h = find_homomorphism(a, b, o);
      if (!h) {
        return Outcome{counterexample, "no homomorphism",
                       Json{{"found", false},
                            {"counterexample", "exhaustive search found no homomorphism"}}};
      }
      return Outcome{ok, "homomorphism found", Json{{"found", true}, {"homomorphism", to_json(*h)}}};
    });
    sub->add_option("--from", s_.from)->required();
    sub->add_option("--to", s_.to)->required();
  }

  void add_core() {
    auto* sub = command(&app_, "core", "Core of a structure", [this] {
      const Core c = core_of(load_structure(s_.structure, g_));
      return Outcome{ok, "core has " + std::to_string(c.elements.size()) + " elements",
                     to_json(c)};
    });
    sub->add_option("--structure", s_.structure)->required();
  }

  void add_pppower() {
    auto* sub = command(&app_, "pppower", "pp-power of a structure", [this] {
      const Structure a = load_structure(s_.structure, g_);
      const Json defs = read_json_file(s_.defs);
      if (!defs.is_object()) throw InvalidArgument("--defs must hold a JSON object");
      std::vector<std::pair<std::string, PPFormula>> formulas;
      for (const auto& [name, phi] : defs.items()) {
        formulas.emplace_back(name, ppformula_from_json(phi));
      }
      const Structure p = g_.budget ? pp_power(a, n_.n, formulas, *g_.budget)
                                    : pp_power(a, n_.n, formulas);
      return Outcome{ok, "pp-power on " + std::to_string(p.domain()) + " elements", to_json(p)};
    });
    sub->add_option("--structure", s_.structure)->required();
    sub->add_option("--n", n_.n, "Power")->required();
    sub->add_option("--defs", s_.defs, "JSON object of name: PPFormula")->required();
  }

  void add_construct() {
    auto* con = app_.add_subcommand("construct", "Term constructions");
    con->require_subcommand(1);
    con->fallthrough();
    auto options = [this] {
      ConstructionOptions o;
      o.verify_preconditions = !flag_unchecked_;
      return o;
    };
    auto unchecked = [this](CLI::App* sub) {
      sub->add_flag("--unchecked", flag_unchecked_, "Skip precondition checks");
    };

    auto* maj = command(con, "maj", "Symmetric majority from a quasi majority", [this, options] {
      return built_outcome(symmetrize_majority(load_op(c_.quasi_majority, g_), load_op(c_.c2, g_),
                                               load_op(c_.c3, g_), options()),
                           "symmetric majority");
    });
    maj->add_option("--quasi-majority", c_.quasi_majority)->required();
    maj->add_option("--c2", c_.c2, "Binary cyclic operation")->required();
    maj->add_option("--c3", c_.c3, "Ternary cyclic operation")->required();
    unchecked(maj);

    auto* mn = command(con, "min", "Minority from Mal'cev and majority, or symmetrized",
                       [this, options] {
                         if (!c_.minority.empty()) {
                           return built_outcome(
                               symmetrize_minority(load_op(c_.minority, g_), load_op(c_.c2, g_),
                                                   load_op(c_.c3, g_), options()),
                               "symmetric minority");
                         }
                         if (c_.malcev.empty() || c_.majority.empty()) {
                           throw InvalidArgument("give --malcev and --majority, or --minority");
                         }
                         return built_outcome(
                             minority_from_malcev_majority(load_op(c_.malcev, g_),
                                                           load_op(c_.majority, g_), options()),
                             "minority");
                       });
    mn->add_option("--malcev", c_.malcev);
    mn->add_option("--majority", c_.majority);
    auto* minority_opt = mn->add_option("--minority", c_.minority, "Minority to symmetrize");
    mn->add_option("--c2", c_.c2)->needs(minority_opt);
    mn->add_option("--c3", c_.c3)->needs(minority_opt);
    unchecked(mn);

    auto* ds = command(con, "dswitch", "D(x,y,z) = m3(m3(x,y,z), y, z)", [this, options] {
      return built_outcome(d_switch(load_op(c_.m3, g_), options()), "switch operation");
    });
    ds->add_option("--m3", c_.m3, "Symmetric minority over E_3")->required();
    unchecked(ds);

    auto* gmn = command(con, "genmin", "Generalized minority m_n", [this, options] {
      return built_outcome(generalized_minority(load_op(c_.m3, g_), n_.n, options()),
                           "generalized minority");
    });
    gmn->add_option("--m3", c_.m3, "Symmetric minority over E_3")->required();
    gmn->add_option("--n", n_.n, "Odd arity")->required();
    unchecked(gmn);

    auto* tsc = command(con, "ts", "Totally symmetric s_N", [this, options] {
      const auto chain = totally_symmetric_chain(load_op(c_.minority, g_),
                                                 load_op(c_.majority, g_), load_op(c_.s2, g_),
                                                 n_.big_n, options());
      return built_outcome(chain.back(), "totally symmetric operation");
    });
    tsc->add_option("--minority", c_.minority, "Symmetric minority")->required();
    tsc->add_option("--majority", c_.majority, "Symmetric majority")->required();
    tsc->add_option("--s2", c_.s2, "Binary cyclic idempotent")->required();
    tsc->add_option("--N", n_.big_n, "Largest arity")->required();
    unchecked(tsc);

    auto* pr = command(con, "polyrep", "Polynomial form of an idempotent Boolean operation",
                       [this] {
                         const PolyRep p = poly_rep(load_op(c_.op, g_));
                         return Outcome{ok,
                                        std::to_string(p.monomials.size()) + " monomials",
                                        to_json(p)};
                       });
    pr->add_option("--op", c_.op)->required();

    auto* x = command(con, "xi", "Image under the E_3 minor homomorphism", [this, options] {
      const Operation f = load_op(c_.op, g_);
      const PolyRep p = poly_rep(f);
      std::size_t widest = 2;
      for (const auto& w : p.monomials) widest = std::max(widest, w.size());
      std::size_t terms = std::max<std::size_t>(3, p.monomials.size());
      if (terms % 2 == 0) ++terms;
      const auto chains = build_e3_chains(build_e3_pipeline(), widest, terms);
      return built_outcome(xi(f, chains, options()), "xi image");
    });
    x->add_option("--op", c_.op, "Idempotent Boolean operation")->required();
    unchecked(x);
  }

  void add_free() {
    auto* fr = app_.add_subcommand("free", "Free structures from polymorphisms");
    fr->require_subcommand(1);
    fr->fallthrough();
    auto cap = [this] {
      PolOptions o;
      if (g_.budget) o.cap = *g_.budget;
      return o;
    };

    auto* mal = command(fr, "malcev", "Free structure for quasi Mal'cev", [this, cap] {
      const Structure a = load_structure(s_.structure, g_);
      const auto report = free_structure_malcev(a, pol(a, 3, cap()), true);
      return free_outcome(report);
    });
    mal->add_option("--structure", s_.structure)->required();

    auto* cyc = command(fr, "cycle", "Free structure for the cyclic identity", [this, cap] {
      const Structure a = load_structure(s_.structure, g_);
      const auto report = free_structure_cycle(a, n_.p, pol(a, n_.p, cap()), true);
      return free_outcome(report);
    });
    cyc->add_option("--structure", s_.structure)->required();
    cyc->add_option("--p", n_.p, "Prime arity")->required();
  }

  static Outcome free_outcome(const FreeStructureReport& r) {
    std::string summary = std::to_string(r.constructed.domain()) + " elements, ";
    summary += r.hom_equivalent() ? "hom-equivalent to the target" : "not hom-equivalent";
    return {ok, summary, to_json(r)};
  }

  void add_verify() {
    auto* sub = command(&app_, "verify", "Run a named verifier", [this] {
      VerifyParams p;
      if (n_.p) p.p = n_.p;
      if (n_.n) p.n = n_.n;
      if (n_.big_n) p.max_ts = n_.big_n;
      if (!s_.structure.empty()) {
        p.structure = load_structure(s_.structure, g_);
        p.structure_name = strip_json(fs::path(s_.structure).filename().string());
      }
      p.generators = load_ops(v_.ops, g_);
      p.budget = g_.budget;
      const VerifierResult r = verify(s_.condition, p);
      const int code = r.verdict == Verdict::pass   ? ok
                       : r.verdict == Verdict::fail ? counterexample
                                                    : usage;
      return Outcome{code,
                     r.name + ": " + to_string(r.verdict) + " (" + fmt_seconds(r.elapsed_seconds) +
                         ")",
                     to_json(r)};
    });
    std::string names;
    for (const auto& n : verifier_names()) names += (names.empty() ? "" : ", ") + n;
    sub->add_option("name", s_.condition, names)->required();
    sub->add_option("--p", n_.p, "Cycle length or arity");
    sub->add_option("--n", n_.n, "Size for collapse-idemp");
    sub->add_option("--N", n_.big_n, "Largest arity for ts-properties");
    sub->add_option("--fixture", s_.structure, "Fixture name or structure JSON file");
    sub->add_option("--generators", v_.ops, "Generators for majority-search");
  }

  Globals& g_;
  CLI::App app_;
  std::vector<std::pair<CLI::App*, Handler>> handlers_;

  struct {
    std::string op, map, condition, structure, symmetry, tuples, from, to, defs;
  } s_;
  struct {
    std::size_t to = 0, domain = 0, arity = 0, index = 0, p = 0, n = 0, big_n = 0;
  } n_;
  struct {
    std::vector<std::string> args, ops;
  } v_;
  struct {
    std::string quasi_majority, c2, c3, malcev, majority, minority, m3, s2, op;
  } c_;
  RelationArgs rel_;
  bool flag_complete_ = false;
  bool flag_unchecked_ = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  Cli cli(g);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    cli.app().parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << cli.app().help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << cli.app().help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }

  Outcome result;
  try {
    auto r = cli.dispatch();
    if (!r) {
      err << "error: no command\n";
      return usage;
    }
    result = std::move(*r);
  } catch (const ConditionFailure& e) {
    result = {counterexample, e.what(),
              Json{{"role", e.role()}, {"condition", e.condition()},
                   {"counterexample", e.what()}}};
  } catch (const CapExceeded& e) {
    err << "budget error: " << e.what() << "\n";
    return usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }

  if (g.json) {
    out << dump(result.body) << "\n";
  } else {
    out << result.summary << "\n" << result.body.dump(2) << "\n";
  }
  return result.code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace clonelab::cli
