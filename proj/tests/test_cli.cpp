#include <doctest.h>
#include <json.hpp>

#include <sstream>

#include "adjset/io.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    for (auto& a : args)
        if (a.size() > 2 && a.substr(a.size() - 2) == ".g") a = std::string(ADJSET_FIXTURES) + "/" + a;
    std::ostringstream out, err;
    int code = adjset::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

// The json document with the machine specific file path removed.
json doc(const Run& r) {
    json d = json::parse(r.out);
    d["graph"].erase("file");
    return d;
}

} // namespace

TEST_CASE("check") {
    Run r = run({"check", "--graph", "cpdag_confounded.g", "-x", "X", "-y", "Y", "-z", "A,Z", "--json"});
    CHECK(r.code == 0);
    CHECK(doc(r) == json::parse(R"({
        "command": "check", "criterion": "gac", "failed": null, "ok": true, "witness": null,
        "graph": {"edges": 10, "nodes": 6, "type": "cpdag"},
        "x": ["X"], "y": ["Y"], "z": ["A", "Z"]})"));
    CHECK(r.out.find("\"command\"") < r.out.find("\"criterion\""));

    r = run({"check", "--graph", "cpdag_confounded.g", "-x", "X", "-y", "Y", "-z", "A,Z"});
    CHECK(r.out == "gac: yes\n");

    r = run({"check", "--graph", "pag_no_set.g", "-x", "X", "-y", "Y", "-z", "V1,V2,V3", "--json"});
    CHECK(r.code == 1);
    CHECK(doc(r) == json::parse(R"({
        "command": "check", "criterion": "gac", "failed": "blocking", "ok": false,
        "witness": {"nodes": ["X", "V3", "V4", "Y"], "text": "X <-> V3 <-> V4 -> Y"},
        "graph": {"edges": 7, "nodes": 6, "type": "pag"},
        "x": ["X"], "y": ["Y"], "z": ["V1", "V2", "V3"]})"));

    r = run({"check", "--graph", "pag_no_set.g", "-x", "X", "-y", "Y", "-z", "V3,V4"});
    CHECK(r.code == 1);
    CHECK(r.out == "gac: no (forbidden-set)\nwitness: {V4}\n");

    r = run({"check", "--graph", "dag_no_backdoor.g", "-x", "X1,X2", "-y", "Y", "-z", "V2", "--criterion", "bc"});
    CHECK(r.code == 1);
    CHECK(r.out == "bc: no\n");
    r = run({"check", "--graph", "dag_no_backdoor.g", "-x", "X1,X2", "-y", "Y", "-z", "V2", "--criterion", "gbc"});
    CHECK(r.code == 0);
    CHECK(r.out == "gbc: yes\n");
    r = run({"check", "--graph", "mag_visible_edge.g", "-x", "X", "-y", "Y"});
    CHECK(r.code == 0);
}

TEST_CASE("list") {
    Run r = run({"list", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--json"});
    CHECK(r.code == 0);
    CHECK(doc(r) == json::parse(R"({
        "command": "list", "count": 4, "minimal": false, "status": "complete",
        "sets": [["V3"], ["V1", "V3"], ["V2", "V3"], ["V1", "V2", "V3"]],
        "graph": {"edges": 8, "nodes": 6, "type": "pag"},
        "x": ["X"], "y": ["Y"], "z": []})"));

    r = run({"list", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y"});
    CHECK(r.out == "{V3}\n{V1,V3}\n{V2,V3}\n{V1,V2,V3}\n");
    r = run({"list", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--minimal"});
    CHECK(r.out == "{V3}\n");
    r = run({"list", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--include", "V2"});
    CHECK(r.out == "{V2,V3}\n{V1,V2,V3}\n");
    r = run({"list", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--restrict", "V1,V3"});
    CHECK(r.out == "{V3}\n{V1,V3}\n");
    r = run({"list", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--limit", "1", "--json"});
    CHECK(r.code == 0);
    CHECK(doc(r)["status"] == "truncated");
    CHECK(doc(r)["count"] == 1);

    r = run({"list", "--graph", "pag_no_set.g", "-x", "X", "-y", "Y"});
    CHECK(r.code == 1);
    CHECK(r.out == "no adjustment sets\n");
    r = run({"list", "--graph", "pag_not_amenable.g", "-x", "X", "-y", "Y", "--json"});
    CHECK(r.code == 1);
    CHECK(doc(r)["status"] == "not-amenable");
}

TEST_CASE("diagnose") {
    Run r = run({"diagnose", "--graph", "dag_no_backdoor.g", "-x", "X1,X2", "-y", "Y", "--json"});
    CHECK(r.code == 0);
    CHECK(doc(r) == json::parse(R"({
        "amenable": true, "command": "diagnose",
        "criteria": [
            {"criterion": "gac", "exists": true, "triggered": []},
            {"criterion": "gbc", "exists": true, "triggered": []},
            {"criterion": "bc", "exists": false, "triggered": ["P4"]}],
        "hints": ["outcomes-within-possible-descendants", "gac-iff-gbc"],
        "sets": {"bc": null, "gac": ["V1", "V2", "V3"], "gbc": ["V2", "V3"]},
        "graph": {"edges": 7, "nodes": 6, "type": "dag"},
        "x": ["X1", "X2"], "y": ["Y"], "z": []})"));
    r = run({"diagnose", "--graph", "dag_no_backdoor.g", "-x", "X1,X2", "-y", "Y"});
    CHECK(r.out.find("GAC: yes\nGBC: yes\nBC: no (P4)\n") == 0);

    r = run({"diagnose", "--graph", "pag_not_amenable.g", "-x", "X", "-y", "Y", "--json"});
    CHECK(r.code == 1);
    CHECK(doc(r)["criteria"][0] == json::parse(R"({"criterion": "gac", "exists": false, "triggered": ["P1"]})"));
    CHECK(doc(r)["amenable"] == false);

    r = run({"diagnose", "--graph", "pag_no_set.g", "-x", "X", "-y", "Y", "--json"});
    CHECK(r.code == 1);
    CHECK(doc(r)["criteria"][0]["triggered"] == json::parse(R"(["P2"])"));

    r = run({"diagnose", "--graph", "dag_no_gbc.g", "-x", "X1,X2", "-y", "Y1,Y2", "--json"});
    CHECK(r.code == 0);
    CHECK(doc(r)["criteria"][1]["triggered"] == json::parse(R"(["P3"])"));
}

TEST_CASE("small queries") {
    Run r = run({"amenable", "--graph", "pag_not_amenable.g", "-x", "X", "-y", "Y", "--json"});
    CHECK(r.code == 1);
    CHECK(doc(r)["witness"] == json::parse(R"({"nodes": ["X", "Y"], "text": "X o-o Y"})"));
    r = run({"amenable", "--graph", "mag_visible_edge.g", "-x", "X", "-y", "Y"});
    CHECK(r.code == 0);
    CHECK(r.out == "amenable: yes\n");

    r = run({"forb", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y"});
    CHECK(r.out == "forbidden: {V4,Y}\n");
    r = run({"forb", "--graph", "dag_exposure_forbidden.g", "-x", "X1,X2", "-y", "Y1,Y2", "--json"});
    CHECK(doc(r)["forbidden"] == json::parse(R"(["V2", "Y1", "X2", "Y2"])"));
    r = run({"adjust", "--graph", "cpdag_confounded.g", "-x", "X", "-y", "Y"});
    CHECK(r.out == "adjust: {I,A,Z,B}\n");

    r = run({"construct", "--graph", "dag_no_backdoor.g", "-x", "X1,X2", "-y", "Y", "--criterion", "gbc"});
    CHECK(r.code == 0);
    CHECK(r.out == "gbc: {V2,V3}\n");
    r = run({"construct", "--graph", "dag_no_backdoor.g", "-x", "X1,X2", "-y", "Y", "--criterion", "bc", "--json"});
    CHECK(r.code == 1);
    CHECK(doc(r)["set"].is_null());
    r = run({"construct", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y"});
    CHECK(r.out == "gac: {V1,V2,V3}\n");

    r = run({"preprocess-x", "--graph", "mag_two_exposures.g", "-x", "X1,X2", "-y", "Y"});
    CHECK(r.out == "exposures: {X1}\n");

    r = run({"msep", "--graph", "dag_no_backdoor.g", "-x", "V3", "-y", "X2", "--json"});
    CHECK(r.code == 0);
    CHECK(doc(r)["separated"] == true);
    r = run({"msep", "--graph", "dag_no_backdoor.g", "-x", "V3", "-y", "X1"});
    CHECK(r.code == 1);
    CHECK(r.out == "separated: no\n");

    r = run({"validate", "--graph", "cpdag_confounded.g"});
    CHECK(r.code == 0);
    CHECK(r.out == "valid cpdag: 6 nodes, 10 edges\n");
}

TEST_CASE("orient") {
    Run r = run({"orient", "--graph", "pag_not_amenable.g", "--avoid-into", "X"});
    CHECK(r.code == 0);
    adjset::MixedGraph m = adjset::parse_graph(r.out);
    CHECK(m.graph_class() == adjset::GraphClass::Mag);
    for (const char* v : {"V1", "V2", "Y"}) CHECK(m.has_directed(m.id("X"), m.id(v)));
    r = run({"orient", "--graph", "dag_no_backdoor.g", "--json"});
    CHECK(adjset::parse_graph(doc(r)["oriented"].get<std::string>()) ==
          adjset::load_graph_file(std::string(ADJSET_FIXTURES) + "/dag_no_backdoor.g"));
}

TEST_CASE("sem-verify") {
    Run r = run({"sem-verify", "--graph", "below_outcome.g", "-x", "X", "-y", "Y", "-z", "Z", "--json"});
    CHECK(r.code == 1);
    json d = doc(r);
    CHECK(d["verdict"] == false);
    CHECK(d["certified"] == true);
    CHECK(d["case"] == 3);
    CHECK(std::abs(d["gap"].get<double>()) > 1e-6);

    r = run({"sem-verify", "--graph", "cpdag_confounded.g", "-x", "X", "-y", "Y", "-z", "A,Z", "--json", "--reps", "2"});
    CHECK(r.code == 0);
    d = doc(r);
    CHECK(d["extensions"] == 8);
    CHECK(d["certified"] == true);
    CHECK(d["max_abs_error"].get<double>() < 1e-8);

    r = run({"sem-verify", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "-z", "V3"});
    CHECK(r.code == 2);
}

TEST_CASE("timing and errors") {
    Run r = run({"forb", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--json", "--timing"});
    CHECK(doc(r).contains("elapsed_ms"));
    r = run({"forb", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--json"});
    CHECK_FALSE(doc(r).contains("elapsed_ms"));

    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"check", "-x", "X", "-y", "Y"}).code == 2);
    CHECK(run({"check", "--graph", "missing.g", "-x", "X", "-y", "Y"}).code == 2);
    CHECK(run({"check", "--graph", "pag_four_sets.g", "-x", "Nope", "-y", "Y"}).code == 2);
    CHECK(run({"check", "--graph", "pag_four_sets.g", "-x", "X", "-y", "X"}).code == 2);
    CHECK(run({"check", "--graph", "pag_four_sets.g", "-x", "X"}).code == 2);
    CHECK(run({"check", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--criterion", "iv"}).code == 2);
    CHECK(run({"msep", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y"}).code == 2);
    CHECK(run({"check", "--graph", "pag_four_sets.g", "-x", "X", "-y", "Y", "--criterion", "bc"}).code == 2);
    r = run({"orient", "--graph", "pag_four_sets.g", "--avoid-into", "Q"});
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") == 0);
}
