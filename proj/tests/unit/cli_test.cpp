#include "doctest.h"

#include <sstream>

#include "cli.hpp"
#include "clonelab/io.hpp"

using namespace clonelab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args, int expected_code) {
  args.insert(args.begin(), "--json");
  const Run r = run_cli(args);
  REQUIRE_MESSAGE(r.code == expected_code, r.err);
  const Json j = Json::parse(r.out);
  CHECK(dump(j) + "\n" == r.out);
  return j;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("verify remark-cycles") {
    const Json j = run_json({"verify", "remark-cycles", "--p", "3"}, 0);
    CHECK(j["verdict"] == "pass");
    CHECK(j["details"]["candidates_scanned"] == 177147);
    CHECK(j.contains("elapsed_seconds"));
    const Run text = run_cli({"verify", "remark-cycles", "--p", "2"});
    CHECK(text.code == 0);
    CHECK(text.out.find("remark-cycles: pass") == 0);
  }

  TEST_CASE("check against shipped operations") {
    CHECK(run_json({"check", "sigma_p", "--p", "2", "--ops", "and.json"}, 0)["satisfied"] == true);
    const Json bad = run_json({"check", "quasi_malcev", "--ops", "maj3c0"}, 1);
    CHECK(bad.contains("counterexample"));
    CHECK(run_json({"check", "quasi_minority", "--ops", "m=xor3"}, 0)["satisfied"] == true);
  }

  TEST_CASE("check against a structure") {
    const Json none = run_json({"check", "sigma_p", "--p", "2", "--structure", "c2"}, 1);
    CHECK(none["search"]["definitive"] == true);
    CHECK(none["search"]["candidates_scanned"] == 8);
    run_json({"check", "sigma_p", "--p", "2", "--structure", "b2"}, 0);
    const Json cut = run_json({"--budget", "5", "check", "sigma_p", "--p", "3", "--structure", "c3"}, 2);
    CHECK(cut["budget"] == 5);
  }

  TEST_CASE("star identities") {
    CHECK(run_json({"verify", "star-identities"}, 0)["verdict"] == "pass");
  }

  TEST_CASE("operation commands emit operation JSON") {
    const Json m = run_json({"op", "minor", "--op", "xor2", "--map", "0,0", "--to", "1"}, 0);
    CHECK(operation_from_json(m) == make_constant(2, 1, 0));
    const Json c = run_json({"op", "compose", "--head", "and", "--args", "xor2", "or"}, 0);
    CHECK(c["table"] == Json::array({0, 1, 1, 0}));
    const Json p = run_json({"op", "project", "--domain", "3", "--arity", "2", "--index", "1"}, 0);
    CHECK(operation_from_json(p) == make_projection(3, 2, 1));
  }

  TEST_CASE("relation commands") {
    const Json e = run_json({"essential", "--tuples", "0,1;1,0"}, 0);
    CHECK(e["tuples"] == Json::parse("[[0,0],[1,1]]"));
    const Json b = run_json({"blocks", "--relation", "b2:R"}, 0);
    CHECK(b["blocks"].size() == 1);
    const Json c = run_json({"critical", "--tuples", "0,0,0;0,1,1;1,0,1;1,1,0", "--ops", "xor3", "--complete"}, 0);
    CHECK(c["verdict"] == "critical");
    const Json d = run_json({"decomposable", "--tuples", "0,0,0;0,1,1;1,0,1;1,1,0", "--n", "2"}, 0);
    CHECK(d["decomposable"] == false);
    const Json inv = run_json({"invclosure", "--ops", "xor3", "--tuples", "0,0;0,1;1,0"}, 0);
    CHECK(inv["tuples"].size() == 4);
    const Json p = run_json({"pol", "--structure", "c2", "--arity", "1"}, 0);
    CHECK(p["count"] == 2);
  }

  TEST_CASE("homomorphisms and cores") {
    const Json h = run_json({"hom", "--from", "c4", "--to", "c2"}, 0);
    CHECK(h["homomorphism"]["map"] == Json::array({0, 1, 0, 1}));
    const Json none = run_json({"hom", "--from", "c2", "--to", "c3"}, 1);
    CHECK(none.contains("counterexample"));
    const Json seeded = run_json({"--seed", "99", "hom", "--from", "c2", "--to", "c3"}, 1);
    CHECK(seeded["found"] == false);
    const Json core = run_json({"core", "--structure", "c4"}, 0);
    CHECK(core["elements"].size() == 4);
  }

  TEST_CASE("constructions emit operation and term") {
    const Json maj = run_json({"construct", "maj", "--quasi-majority", "dd3", "--c2", "min3", "--c3", "maj3c0"}, 0);
    CHECK(maj.contains("operation"));
    CHECK(maj["term"]["op"] == "compose");
    const Json fail = run_json({"construct", "maj", "--quasi-majority", "affine3", "--c2", "min3", "--c3", "maj3c0"}, 1);
    CHECK(fail["role"] == "quasi_majority");
    const Json mn = run_json({"construct", "min", "--malcev", "affine3", "--majority", "dd3"}, 0);
    CHECK(mn["operation"]["table"][5] == 0);
    run_json({"construct", "min", "--minority", "min3c0", "--c2", "min3", "--c3", "maj3c0"}, 0);
    const Json ds = run_json({"construct", "dswitch", "--m3", "min3c0"}, 0);
    CHECK(ds["operation"]["table"][2 * 9 + 0 * 3 + 1] == 1);
    const Json gm = run_json({"construct", "genmin", "--m3", "min3c0", "--n", "5"}, 0);
    CHECK(gm["operation"]["arity"] == 5);
    const Json ts = run_json({"construct", "ts", "--minority", "min3c0", "--majority", "maj3c0", "--s2", "min3", "--N", "4"}, 0);
    CHECK(ts["operation"]["arity"] == 4);
    const Json pr = run_json({"construct", "polyrep", "--op", "or"}, 0);
    CHECK(pr["monomials"] == Json::parse("[[1],[2],[1,2]]"));
    const Json x = run_json({"construct", "xi", "--op", "majority2"}, 0);
    CHECK(x["operation"]["domain"] == 3);
  }

  TEST_CASE("free structures") {
    const Json m = run_json({"free", "malcev", "--structure", "b2"}, 0);
    CHECK(m["hom_equivalent"] == true);
    const Json c = run_json({"free", "cycle", "--structure", "c2", "--p", "2"}, 0);
    CHECK(c["constructed"]["domain"] == 16);
  }

  TEST_CASE("pppower reads definitions from a file") {
    const std::string path = "pppower_defs_test.json";
    write_json_file(path, Json::parse(R"({"E":{"free":2,"exists":0,"atoms":[["R",[0,1]]],"eq":[]}})"));
    const Json s = run_json({"pppower", "--structure", "c3", "--n", "1", "--defs", path}, 0);
    CHECK(s["domain"] == 3);
    CHECK(s["relations"]["E"]["tuples"].size() == 3);
  }

  TEST_CASE("verify with a fixture") {
    CHECK(run_json({"verify", "splitting-malcev", "--fixture", "b2"}, 0)["details"]["free_structure_size"] == 16);
    CHECK(run_json({"verify", "collapse-idemp", "--n", "3"}, 0)["verdict"] == "pass");
    CHECK(run_json({"verify", "dichotomy", "--fixture", "c2"}, 0)["details"]["branch"] ==
          "a_constructs_i2");
  }

  TEST_CASE("verdicts do not depend on the seed") {
    for (const char* seed : {"1", "2", "12345"}) {
      const Json j = run_json({"--seed", seed, "verify", "dichotomy", "--fixture", "b2"}, 0);
      CHECK(j["verdict"] == "pass");
    }
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"verify", "no-such-verifier"}).code == 2);
    CHECK(run_cli({"check", "sigma_p", "--p", "2"}).code == 2);
    CHECK(run_cli({"hom", "--from", "nothing", "--to", "c2"}).code == 2);
    CHECK(run_cli({"op", "minor", "--op", "and"}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
  }
}
