#include <doctest.h>

#include <algorithm>

#include "adjset/adjustment.hpp"
#include "adjset/orientation.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace adjset;
using namespace adjset::testing;

namespace {

std::vector<NodeSet> all_passing(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                 bool (*check)(const MixedGraph&, const NodeSet&, const NodeSet&, const NodeSet&)) {
    std::vector<NodeSet> out;
    for (const NodeSet& z : subsets(g.all_nodes() - x - y))
        if (check(g, x, y, z)) out.push_back(z);
    return out;
}

bool lib_gac(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    return gac_verify(g, x, y, z).ok;
}

std::vector<NodeSet> sets(const MixedGraph& g, std::initializer_list<std::initializer_list<const char*>> list) {
    std::vector<NodeSet> out;
    for (auto names : list) out.push_back(S(g, names));
    std::sort(out.begin(), out.end());
    return out;
}

MixedGraph random_graph(Rng& rng, int kind, std::size_t n) {
    switch (kind % 3) {
    case 0: return random_dag(rng, n, 0.35);
    case 1: return random_mag(rng, n, 0.3, 0.25);
    default: return cpdag_of(random_dag(rng, n, 0.4));
    }
}

} // namespace

TEST_CASE("amenability examples") {
    MixedGraph a = fixture("pag_not_amenable");
    auto r = amenable(a, S(a, {"X"}), S(a, {"Y"}));
    CHECK_FALSE(r.ok);
    REQUIRE(r.witness);
    CHECK(format_path(a, *r.witness) == "X o-o Y");

    MixedGraph b = fixture("mag_invisible_edge");
    CHECK_FALSE(amenable(b, S(b, {"X"}), S(b, {"Y"})).ok);
    MixedGraph as_dag = build_graph(b.names(), b.edges(), GraphClass::Dag);
    CHECK(amenable(as_dag, S(as_dag, {"X"}), S(as_dag, {"Y"})).ok);

    MixedGraph c = fixture("mag_visible_edge");
    CHECK(amenable(c, S(c, {"X"}), S(c, {"Y"})).ok);

    for (const char* name : {"cpdag_confounded", "pag_four_sets", "pag_no_set"}) {
        MixedGraph g = fixture(name);
        CHECK(amenable(g, S(g, {"X"}), S(g, {"Y"})).ok);
    }
}

TEST_CASE("forbidden sets and adjust") {
    MixedGraph gc = fixture("cpdag_confounded");
    CHECK(forbidden_set(gc, S(gc, {"X"}), S(gc, {"Y"})) == S(gc, {"Y"}));
    CHECK(adjust_set(gc, S(gc, {"X"}), S(gc, {"Y"})) == S(gc, {"I", "A", "Z", "B"}));

    MixedGraph a = fixture("pag_four_sets");
    CHECK(forbidden_set(a, S(a, {"X"}), S(a, {"Y"})) == S(a, {"V4", "Y"}));
    CHECK(adjust_set(a, S(a, {"X"}), S(a, {"Y"})) == S(a, {"V1", "V2", "V3"}));
    MixedGraph b = fixture("pag_no_set");
    CHECK(forbidden_set(b, S(b, {"X"}), S(b, {"Y"})) == S(b, {"V4", "Y"}));
    CHECK(adjust_set(b, S(b, {"X"}), S(b, {"Y"})) == S(b, {"V1", "V2", "V3"}));

    MixedGraph d2 = fixture("dag_exposure_forbidden");
    CHECK(forbidden_set(d2, S(d2, {"X1", "X2"}), S(d2, {"Y1", "Y2"})) == S(d2, {"X2", "V2", "Y1", "Y2"}));
}

TEST_CASE("proper back-door graphs") {
    MixedGraph gc = fixture("cpdag_confounded");
    auto removed = backdoor_removed_edges(gc, S(gc, {"X"}), S(gc, {"Y"}));
    REQUIRE(removed.size() == 1);
    CHECK(removed[0] == Edge::directed(gc.id("X"), gc.id("Y")).canonical());
    CHECK(proper_backdoor_graph(gc, S(gc, {"X"}), S(gc, {"Y"})).edge_count() == gc.edge_count() - 1);

    MixedGraph b = fixture("pag_no_set");
    removed = backdoor_removed_edges(b, S(b, {"X"}), S(b, {"Y"}));
    REQUIRE(removed.size() == 1);
    CHECK(removed[0] == Edge::directed(b.id("X"), b.id("V4")).canonical());

    MixedGraph v = fixture("dag_no_backdoor");
    CHECK(proper_backdoor_graph(v, S(v, {"V2"}), S(v, {"V1"})) == v);
}

TEST_CASE("gac verdicts on the fixtures") {
    MixedGraph gc = fixture("cpdag_confounded");
    const NodeSet x1 = S(gc, {"X"}), y1 = S(gc, {"Y"});
    CHECK(gac_verify(gc, x1, y1, S(gc, {"A", "Z"})).ok);
    auto listed = all_passing(gc, x1, y1, lib_gac);
    CHECK(listed == all_passing(gc, x1, y1, gac_oracle));
    for (const NodeSet& z : listed)
        CHECK((S(gc, {"Z", "A"}).is_subset_of(z) || S(gc, {"Z", "B"}).is_subset_of(z)));
    CHECK(listed.size() == 6);

    MixedGraph a = fixture("pag_four_sets");
    CHECK(all_passing(a, S(a, {"X"}), S(a, {"Y"}), lib_gac) ==
          sets(a, {{"V3"}, {"V1", "V3"}, {"V2", "V3"}, {"V1", "V2", "V3"}}));

    MixedGraph b = fixture("pag_no_set");
    CHECK(all_passing(b, S(b, {"X"}), S(b, {"Y"}), lib_gac).empty());
    Verdict v = gac_verify(b, S(b, {"X"}), S(b, {"Y"}), S(b, {"V1", "V2", "V3"}));
    CHECK(v.failed == Condition::Blocking);
    REQUIRE(std::holds_alternative<Path>(v.witness));
    const Path& p = std::get<Path>(v.witness);
    CHECK_FALSE(is_blocked(p, S(b, {"V1", "V2", "V3"}), b));
    CHECK_FALSE(is_possibly_directed(b, p));
    v = gac_verify(b, S(b, {"X"}), S(b, {"Y"}), S(b, {"V3", "V4"}));
    CHECK(v.failed == Condition::ForbiddenSet);
    REQUIRE(std::holds_alternative<NodeSet>(v.witness));
    CHECK(std::get<NodeSet>(v.witness) == S(b, {"V4"}));

    MixedGraph c = fixture("mag_visible_edge");
    CHECK(gac_verify(c, S(c, {"X"}), S(c, {"Y"}), c.empty_set()).ok);
    MixedGraph p3 = fixture("pag_not_amenable");
    v = gac_verify(p3, S(p3, {"X"}), S(p3, {"Y"}), p3.empty_set());
    CHECK(v.failed == Condition::Amenability);
    CHECK(std::holds_alternative<Path>(v.witness));

    MixedGraph d1 = fixture("dag_no_gbc");
    CHECK(gac_verify(d1, S(d1, {"X1", "X2"}), S(d1, {"Y1", "Y2"}), S(d1, {"V1", "V2"})).ok);
    MixedGraph d2 = fixture("dag_exposure_forbidden");
    CHECK(all_passing(d2, S(d2, {"X1", "X2"}), S(d2, {"Y1", "Y2"}), lib_gac).empty());

    MixedGraph p7 = fixture("pag_no_gbc");
    CHECK(all_passing(p7, S(p7, {"X1", "X2"}), S(p7, {"Y"}), lib_gac) ==
          sets(p7, {{"V1", "V2"}, {"V1", "V2", "V4"}, {"V1", "V2", "V5"}, {"V1", "V2", "V4", "V5"}}));
    MixedGraph d7 = fixture("dag_gbc_needs_latent");
    CHECK(gac_verify(d7, S(d7, {"X1", "X2"}), S(d7, {"Y"}), S(d7, {"V1", "V2"})).ok);

    MixedGraph g8 = fixture("dag_no_backdoor");
    CHECK(all_passing(g8, S(g8, {"X1", "X2"}), S(g8, {"Y"}), lib_gac) ==
          sets(g8, {{"V2"}, {"V3"}, {"V2", "V3"}, {"V1", "V2"}, {"V1", "V3"}, {"V1", "V2", "V3"}}));
}

TEST_CASE("argument errors") {
    MixedGraph g = fixture("dag_no_backdoor");
    CHECK_THROWS_AS(gac_verify(g, S(g, {"X1"}), S(g, {"X1"}), g.empty_set()), Error);
    CHECK_THROWS_AS(gac_verify(g, g.empty_set(), S(g, {"Y"}), g.empty_set()), Error);
    CHECK_THROWS_AS(gac_verify(g, S(g, {"X1"}), S(g, {"Y"}), S(g, {"Y"})), Error);
    CHECK_THROWS_AS(backdoor_verify(fixture("cpdag_confounded"), S(g, {"X1"}), S(g, {"Y"}), g.empty_set()), Error);
}

TEST_CASE("constructive sets") {
    MixedGraph a = fixture("pag_four_sets");
    const NodeSet xa = S(a, {"X"}), ya = S(a, {"Y"});
    CHECK(constructive(a, xa, ya, forbidden_set(a, xa, ya)) == S(a, {"V1", "V2", "V3"}));

    MixedGraph p7 = fixture("pag_no_gbc");
    const NodeSet x7 = S(p7, {"X1", "X2"}), y7 = S(p7, {"Y"});
    CHECK_FALSE(constructive(p7, x7, y7, poss_de(p7, x7)));
    CHECK(constructive(p7, x7, y7, forbidden_set(p7, x7, y7)));

    try {
        constructive(a, xa, ya, S(a, {"Y"}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotSuperSetOfForb);
    }
    try {
        constructive(a, xa, ya, S(a, {"V3", "V4", "Y"}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotDescendral);
    }
}

TEST_CASE("exposure preprocessing") {
    MixedGraph m = fixture("mag_two_exposures");
    const NodeSet x = S(m, {"X1", "X2"}), y = S(m, {"Y"});
    CHECK_FALSE(constructive(m, x, y, forbidden_set(m, x, y)));
    NodeSet x2 = preprocess_exposures(m, x, y);
    CHECK(x2 == S(m, {"X1"}));
    CHECK(gac_verify(m, x2, y, S(m, {"V2"})).ok);

    MixedGraph g8 = fixture("dag_no_backdoor");
    CHECK(preprocess_exposures(g8, S(g8, {"X1", "X2"}), S(g8, {"Y"})) == S(g8, {"X1", "X2"}));
    MixedGraph iso = build_graph({"X", "A", "Y"}, {Edge::directed(1, 0), Edge::directed(1, 2)}, GraphClass::Dag);
    CHECK(preprocess_exposures(iso, NodeSet(3, {0}), NodeSet(3, {2})).empty());
}

TEST_CASE("back-door criteria on the fixtures") {
    MixedGraph g8 = fixture("dag_no_backdoor");
    const NodeSet x = S(g8, {"X1", "X2"}), y = S(g8, {"Y"});
    CHECK(all_passing(g8, x, y, [](const MixedGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& z) {
              return backdoor_verify(g, a, b, z);
          }).empty());
    CHECK_FALSE(constructive_backdoor(g8, x, y));
    CHECK(all_passing(g8, x, y, [](const MixedGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& z) {
              return gbc_verify(g, a, b, z);
          }) == sets(g8, {{"V2"}, {"V3"}, {"V2", "V3"}}));
    CHECK(constructive_gbc(g8, x, y) == S(g8, {"V2", "V3"}));

    MixedGraph tri = build_graph({"C", "X", "Y"}, {Edge::directed(0, 1), Edge::directed(0, 2), Edge::directed(1, 2)},
                                 GraphClass::Dag);
    CHECK(backdoor_verify(tri, NodeSet(3, {1}), NodeSet(3, {2}), NodeSet(3, {0})));
    CHECK_FALSE(backdoor_verify(tri, NodeSet(3, {1}), NodeSet(3, {2}), NodeSet(3)));
    CHECK(constructive_backdoor(tri, NodeSet(3, {1}), NodeSet(3, {2})) == NodeSet(3, {0}));

    MixedGraph d1 = fixture("dag_no_gbc");
    const NodeSet x6 = S(d1, {"X1", "X2"}), y6 = S(d1, {"Y1", "Y2"});
    CHECK(all_passing(d1, x6, y6, gbc_oracle).empty());
    CHECK_FALSE(constructive_gbc(d1, x6, y6));
    CHECK_FALSE(constructive_backdoor(d1, x6, y6));

    MixedGraph d7 = fixture("dag_gbc_needs_latent");
    const NodeSet x7 = S(d7, {"X1", "X2"}), y7 = S(d7, {"Y"});
    auto gbc7 = all_passing(d7, x7, y7, [](const MixedGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& z) {
        return gbc_verify(g, a, b, z);
    });
    CHECK_FALSE(gbc7.empty());
    for (const NodeSet& z : gbc7) CHECK(z.contains(d7.id("L")));

    MixedGraph p7 = fixture("pag_no_gbc");
    CHECK_FALSE(constructive_gbc(p7, S(p7, {"X1", "X2"}), S(p7, {"Y"})));

    MixedGraph lone = build_graph({"X", "Y", "W"}, {Edge::directed(0, 1), Edge::directed(0, 2)}, GraphClass::Dag);
    CHECK(gbc_verify(lone, NodeSet(3, {0}), NodeSet(3, {1}), NodeSet(3)));
}

TEST_CASE("diagnosis") {
    auto find = [](const DiagnosisReport& r, Criterion c) {
        return *std::find_if(r.criteria.begin(), r.criteria.end(), [&](const Diagnosis& d) { return d.criterion == c; });
    };
    MixedGraph a = fixture("pag_not_amenable");
    auto r = diagnose(a, S(a, {"X"}), S(a, {"Y"}));
    CHECK_FALSE(r.amenable);
    CHECK(find(r, Criterion::Gac).triggered == std::vector<Pattern>{Pattern::P1});
    CHECK(r.criteria.size() == 2);

    MixedGraph b = fixture("pag_no_set");
    r = diagnose(b, S(b, {"X"}), S(b, {"Y"}));
    CHECK(find(r, Criterion::Gac).triggered == std::vector<Pattern>{Pattern::P2});
    CHECK_FALSE(find(r, Criterion::Gbc).exists);

    MixedGraph d1 = fixture("dag_no_gbc");
    r = diagnose(d1, S(d1, {"X1", "X2"}), S(d1, {"Y1", "Y2"}));
    CHECK(find(r, Criterion::Gac).exists);
    CHECK(find(r, Criterion::Gbc).triggered == std::vector<Pattern>{Pattern::P3});

    MixedGraph g8 = fixture("dag_no_backdoor");
    r = diagnose(g8, S(g8, {"X1", "X2"}), S(g8, {"Y"}));
    CHECK(find(r, Criterion::Gac).exists);
    CHECK(find(r, Criterion::Gac).triggered.empty());
    CHECK(find(r, Criterion::Gbc).exists);
    CHECK(find(r, Criterion::Bc).triggered == std::vector<Pattern>{Pattern::P4});
    CHECK(r.bc_set == std::nullopt);

    MixedGraph d2 = fixture("dag_exposure_forbidden");
    r = diagnose(d2, S(d2, {"X1", "X2"}), S(d2, {"Y1", "Y2"}));
    CHECK(std::find(r.hints.begin(), r.hints.end(), Hint::ExposureForbidden) != r.hints.end());
    CHECK_FALSE(r.gac_set);
}

TEST_CASE("gac verdicts match the path definition") {
    Rng rng(404);
    for (int rep = 0; rep < 900; ++rep) {
        MixedGraph g = random_graph(rng, rep, 3 + rep % 6);
        auto q = random_query(rng, g, 2, 2, 0.4);
        REQUIRE(amenable(g, q.x, q.y).ok == amenable_oracle(g, q.x, q.y));
        REQUIRE(forbidden_set(g, q.x, q.y) == forb_oracle(g, q.x, q.y));
        REQUIRE(gac_verify(g, q.x, q.y, q.z).ok == gac_oracle(g, q.x, q.y, q.z));
        REQUIRE(gac_verify_by_paths(g, q.x, q.y, q.z).ok == gac_oracle(g, q.x, q.y, q.z));
    }
}

TEST_CASE("pag fixtures match the path definition for every z") {
    for (const char* name : {"pag_not_amenable", "pag_four_sets", "pag_no_set", "pag_no_gbc"}) {
        MixedGraph g = fixture(name);
        NodeSet x = g.find("X") ? S(g, {"X"}) : S(g, {"X1", "X2"});
        NodeSet y = S(g, {"Y"});
        for (const NodeSet& z : subsets(g.all_nodes() - x - y))
            CHECK(gac_verify(g, x, y, z).ok == gac_oracle(g, x, y, z));
    }
}

TEST_CASE("cpdag verdicts hold in every member dag") {
    Rng rng(17);
    for (int rep = 0; rep < 300; ++rep) {
        MixedGraph cp = cpdag_of(random_dag(rng, 3 + rep % 4, 0.5));
        auto ext = list_dag_extensions(cp);
        auto q = random_query(rng, cp, 2, 1, 0.4);
        const bool ok = gac_verify(cp, q.x, q.y, q.z).ok;
        // Members of a non-amenable class can disagree (X o-o Y), the
        // class verdict is then negative.
        if (!amenable(cp, q.x, q.y).ok) {
            CHECK_FALSE(ok);
            continue;
        }
        for (const auto& d : ext) REQUIRE(gac_verify(d, q.x, q.y, q.z).ok == ok);
    }
}

TEST_CASE("separation does not depend on the representative") {
    Rng rng(23);
    auto check_graph = [](const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
        if (!amenable(g, x, y).ok || z.intersects(forbidden_set(g, x, y))) return;
        const auto removed = backdoor_removed_edges(g, x, y);
        const bool sep = !m_connected(separation_graph(g, x, y), x, y, z);
        for_each_representative(g, [&](const MixedGraph& h) {
            CHECK(!m_connected(remove_edges(h, removed), x, y, z) == sep);
            return true;
        });
    };
    for (int rep = 0; rep < 300; ++rep) {
        MixedGraph cp = cpdag_of(random_dag(rng, 3 + rep % 5, 0.5));
        auto q = random_query(rng, cp, 2, 2, 0.4);
        check_graph(cp, q.x, q.y, q.z);
    }
    for (const char* name : {"pag_four_sets", "pag_no_set", "pag_no_gbc"}) {
        MixedGraph g = fixture(name);
        NodeSet x = g.find("X") ? S(g, {"X"}) : S(g, {"X1", "X2"});
        for (const NodeSet& z : subsets(g.all_nodes() - x - S(g, {"Y"}))) check_graph(g, x, S(g, {"Y"}), z);
    }
}

TEST_CASE("constructive sets are complete") {
    Rng rng(61);
    for (int rep = 0; rep < 300; ++rep) {
        MixedGraph g = random_graph(rng, rep, 3 + rep % 5);
        auto q = random_query(rng, g, 2, 2, 0.0);
        const NodeSet forb = forbidden_set(g, q.x, q.y);
        for (const NodeSet& avoid : {forb, poss_de(g, q.x) | forb}) {
            bool any = false;
            for (const NodeSet& z : subsets(g.all_nodes() - q.x - q.y - avoid))
                if (gac_oracle(g, q.x, q.y, z)) {
                    any = true;
                    break;
                }
            auto got = constructive(g, q.x, q.y, avoid);
            REQUIRE(got.has_value() == any);
            if (got) CHECK(gac_oracle(g, q.x, q.y, *got));
        }
        if (amenable(g, q.x, q.y).ok && q.x.intersects(forb)) CHECK_FALSE(constructive(g, q.x, q.y, forb));
    }
}

TEST_CASE("criteria nest and the back-door constructions are complete") {
    Rng rng(88);
    for (int rep = 0; rep < 250; ++rep) {
        MixedGraph g = random_graph(rng, rep, 3 + rep % 5);
        auto q = random_query(rng, g, 3, 2, 0.0);
        const bool dag = g.graph_class() == GraphClass::Dag;
        bool any_gbc = false, any_bc = false, any_gac = false;
        for (const NodeSet& z : subsets(g.all_nodes() - q.x - q.y)) {
            const bool gac = gac_oracle(g, q.x, q.y, z);
            const bool gbc = gbc_oracle(g, q.x, q.y, z);
            REQUIRE(gbc_verify(g, q.x, q.y, z) == gbc);
            REQUIRE(gbc_verify_by_reach(g, q.x, q.y, z) == gbc);
            if (gbc) CHECK(gac);
            any_gac |= gac;
            any_gbc |= gbc;
            if (dag) {
                const bool bc = bc_oracle(g, q.x, q.y, z);
                REQUIRE(backdoor_verify(g, q.x, q.y, z) == bc);
                if (bc) CHECK(gbc);
                any_bc |= bc;
            }
        }
        CHECK(constructive_gbc(g, q.x, q.y).has_value() == any_gbc);
        if (dag) CHECK(constructive_backdoor(g, q.x, q.y).has_value() == any_bc);

        auto r = diagnose(g, q.x, q.y);
        CHECK(r.gac_set.has_value() == any_gac);
        for (Hint h : r.hints) {
            if (h == Hint::NotAmenable || h == Hint::ExposureForbidden) CHECK_FALSE(any_gac);
            if (h == Hint::OutcomesBelowExposures) CHECK(any_gac == !q.x.intersects(forbidden_set(g, q.x, q.y)));
            if (h == Hint::GacIffBc) CHECK(any_gac == any_bc);
            if (h == Hint::GacIffGbc) CHECK(any_gac == any_gbc);
        }
        if (q.x.size() == 1) CHECK(any_gac == any_gbc);
    }
}
