#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "adjset/adjustment.hpp"
#include "adjset/enumerate.hpp"
#include "adjset/io.hpp"
#include "adjset/orientation.hpp"
#include "adjset/sem.hpp"

namespace adjset {

namespace {

using json = nlohmann::json;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kInputError = 2;
constexpr int kInconsistent = 3;

struct Options {
    std::string graph;
    std::string x, y, z;
    bool as_json = false;
    bool timing = false;
    std::string criterion = "gac";
    bool minimal = false;
    std::string include, restrict_to;
    std::size_t limit = 10000;
    std::string avoid_into;
    std::uint64_t seed = 1;
    std::size_t reps = 3;
};

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

json names_json(const MixedGraph& g, const NodeSet& s) { return g.names_of(s); }

std::string braces(const MixedGraph& g, const NodeSet& s) {
    std::string out = "{";
    for (const auto& n : g.names_of(s)) out += (out.size() > 1 ? "," : "") + n;
    return out + "}";
}

json path_json(const MixedGraph& g, const Path& p) {
    json nodes = json::array();
    for (NodeId v : p.nodes) nodes.push_back(g.name(v));
    return {{"nodes", nodes}, {"text", format_path(g, p)}};
}

json witness_json(const MixedGraph& g, const Verdict& v) {
    if (auto p = std::get_if<Path>(&v.witness)) return path_json(g, *p);
    if (auto s = std::get_if<NodeSet>(&v.witness)) return names_json(g, *s);
    return nullptr;
}

std::string witness_text(const MixedGraph& g, const Verdict& v) {
    if (auto p = std::get_if<Path>(&v.witness)) return format_path(g, *p);
    if (auto s = std::get_if<NodeSet>(&v.witness)) return braces(g, *s);
    return "";
}

struct Query {
    MixedGraph g;
    NodeSet x, y, z;
};

Query load(const Options& o, bool need_xy) {
    if (o.graph.empty()) throw Error(ErrorKind::InvalidArgument, "--graph is required");
    Query q{load_graph_file(o.graph), {}, {}, {}};
    q.x = q.g.set_of(split_names(o.x));
    q.y = q.g.set_of(split_names(o.y));
    q.z = q.g.set_of(split_names(o.z));
    if (need_xy && (q.x.empty() || q.y.empty()))
        throw Error(ErrorKind::InvalidArgument, "-x and -y are required");
    return q;
}

// Emits a result document: json, or the given human-readable lines.
struct Reporter {
    std::ostream& out;
    const Options& opt;
    json doc;

    void finish(const std::vector<std::string>& lines, double ms) {
        if (opt.as_json) {
            if (opt.timing) doc["elapsed_ms"] = ms;
            out << doc.dump(2) << '\n';
        } else {
            for (const auto& l : lines) out << l << '\n';
        }
    }
};

json base_doc(const std::string& command, const Options& o, const Query& q) {
    json d;
    d["command"] = command;
    d["graph"] = {{"file", o.graph},
                  {"type", to_string(q.g.graph_class())},
                  {"nodes", q.g.size()},
                  {"edges", q.g.edge_count()}};
    d["x"] = names_json(q.g, q.x);
    d["y"] = names_json(q.g, q.y);
    d["z"] = names_json(q.g, q.z);
    return d;
}

int cmd_validate(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, false);
    r.doc = base_doc("validate", o, q);
    r.doc["valid"] = true;
    lines.push_back(std::string("valid ") + to_string(q.g.graph_class()) + ": " +
                    std::to_string(q.g.size()) + " nodes, " + std::to_string(q.g.edge_count()) +
                    " edges");
    return kYes;
}

int cmd_amenable(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    auto res = amenable(q.g, q.x, q.y);
    r.doc = base_doc("amenable", o, q);
    r.doc["amenable"] = res.ok;
    r.doc["witness"] = res.witness ? path_json(q.g, *res.witness) : json(nullptr);
    lines.push_back(res.ok ? "amenable: yes" : "amenable: no");
    if (res.witness) lines.push_back("witness: " + format_path(q.g, *res.witness));
    return res.ok ? kYes : kNo;
}

int cmd_forb(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    NodeSet f = forbidden_set(q.g, q.x, q.y);
    r.doc = base_doc("forb", o, q);
    r.doc["forbidden"] = names_json(q.g, f);
    lines.push_back("forbidden: " + braces(q.g, f));
    return kYes;
}

int cmd_adjust(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    NodeSet a = adjust_set(q.g, q.x, q.y);
    r.doc = base_doc("adjust", o, q);
    r.doc["adjust"] = names_json(q.g, a);
    lines.push_back("adjust: " + braces(q.g, a));
    return kYes;
}

int cmd_check(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    r.doc = base_doc("check", o, q);
    r.doc["criterion"] = o.criterion;
    bool ok;
    if (o.criterion == "gac") {
        Verdict v = gac_verify(q.g, q.x, q.y, q.z);
        ok = v.ok;
        r.doc["failed"] = v.failed ? json(to_string(*v.failed)) : json(nullptr);
        r.doc["witness"] = witness_json(q.g, v);
        if (!ok) {
            lines.push_back(std::string("gac: no (") + to_string(*v.failed) + ")");
            if (auto w = witness_text(q.g, v); !w.empty()) lines.push_back("witness: " + w);
        }
    } else if (o.criterion == "gbc") {
        ok = gbc_verify(q.g, q.x, q.y, q.z);
    } else {
        ok = backdoor_verify(q.g, q.x, q.y, q.z);
    }
    r.doc["ok"] = ok;
    if (ok || o.criterion != "gac") lines.insert(lines.begin(), o.criterion + (ok ? ": yes" : ": no"));
    return ok ? kYes : kNo;
}

int cmd_construct(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    std::optional<NodeSet> set;
    if (o.criterion == "gac") set = constructive(q.g, q.x, q.y, forbidden_set(q.g, q.x, q.y));
    else if (o.criterion == "gbc") set = constructive_gbc(q.g, q.x, q.y);
    else set = constructive_backdoor(q.g, q.x, q.y);
    r.doc = base_doc("construct", o, q);
    r.doc["criterion"] = o.criterion;
    r.doc["set"] = set ? names_json(q.g, *set) : json(nullptr);
    lines.push_back(o.criterion + ": " + (set ? braces(q.g, *set) : std::string("none")));
    return set ? kYes : kNo;
}

int cmd_list(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    EnumConstraints c;
    if (!o.include.empty()) c.must_include = q.g.set_of(split_names(o.include));
    if (!o.restrict_to.empty()) c.allowed = q.g.set_of(split_names(o.restrict_to));
    c.minimal_only = o.minimal;
    c.limit = o.limit;
    json sets = json::array();
    EnumStatus status = for_each_adjustment_set(q.g, q.x, q.y, c, [&](const NodeSet& s) {
        sets.push_back(names_json(q.g, s));
        lines.push_back(braces(q.g, s));
        return true;
    });
    r.doc = base_doc("list", o, q);
    r.doc["minimal"] = o.minimal;
    r.doc["sets"] = sets;
    r.doc["count"] = sets.size();
    r.doc["status"] = to_string(status);
    if (status == EnumStatus::NotAmenable) lines.push_back("not amenable: no adjustment sets");
    if (status == EnumStatus::Truncated) lines.push_back("... truncated at " + std::to_string(o.limit));
    if (sets.empty() && status == EnumStatus::Complete) lines.push_back("no adjustment sets");
    return sets.empty() ? kNo : kYes;
}

int cmd_diagnose(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    DiagnosisReport d = diagnose(q.g, q.x, q.y);
    r.doc = base_doc("diagnose", o, q);
    r.doc["amenable"] = d.amenable;
    json crit = json::array();
    for (const auto& c : d.criteria) {
        json trig = json::array();
        std::string t;
        for (Pattern p : c.triggered) {
            trig.push_back(to_string(p));
            t += (t.empty() ? "" : ",") + std::string(to_string(p));
        }
        crit.push_back({{"criterion", to_string(c.criterion)}, {"exists", c.exists}, {"triggered", trig}});
        std::string name = to_string(c.criterion);
        for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        lines.push_back(name + ": " + (c.exists ? "yes" : "no") + (t.empty() ? "" : " (" + t + ")"));
    }
    r.doc["criteria"] = crit;
    json hints = json::array();
    for (Hint h : d.hints) hints.push_back(to_string(h));
    r.doc["hints"] = hints;
    auto opt_set = [&](const std::optional<NodeSet>& s) { return s ? names_json(q.g, *s) : json(nullptr); };
    r.doc["sets"] = {{"gac", opt_set(d.gac_set)}, {"gbc", opt_set(d.gbc_set)}, {"bc", opt_set(d.bc_set)}};
    if (!d.hints.empty()) {
        std::string h;
        for (Hint x : d.hints) h += (h.empty() ? "" : ", ") + std::string(to_string(x));
        lines.push_back("hints: " + h);
    }
    return d.gac_set ? kYes : kNo;
}

int cmd_preprocess(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    NodeSet x2 = preprocess_exposures(q.g, q.x, q.y);
    r.doc = base_doc("preprocess-x", o, q);
    r.doc["exposures"] = names_json(q.g, x2);
    lines.push_back("exposures: " + braces(q.g, x2));
    return kYes;
}

int cmd_msep(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    bool connected = m_connected(q.g, q.x, q.y, q.z);
    r.doc = base_doc("msep", o, q);
    r.doc["separated"] = !connected;
    lines.push_back(connected ? "separated: no" : "separated: yes");
    return connected ? kNo : kYes;
}

int cmd_orient(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, false);
    MixedGraph h = o.avoid_into.empty() ? orient_to_representative(q.g)
                                        : orient_avoiding_into(q.g, q.g.id(o.avoid_into));
    r.doc = base_doc("orient", o, q);
    r.doc["oriented"] = serialize_graph(h);
    lines.push_back(serialize_graph(h));
    lines.back().pop_back();
    return kYes;
}

int cmd_sem_verify(const Options& o, Reporter& r, std::vector<std::string>& lines) {
    Query q = load(o, true);
    if (q.g.graph_class() != GraphClass::Dag && q.g.graph_class() != GraphClass::Cpdag)
        throw Error(ErrorKind::ClassUnsupported, "sem-verify needs a dag or cpdag");
    const std::vector<MixedGraph> dags = list_dag_extensions(q.g, 1000);
    const Verdict v = gac_verify(q.g, q.x, q.y, q.z);
    r.doc = base_doc("sem-verify", o, q);
    r.doc["verdict"] = v.ok;
    r.doc["extensions"] = dags.size();
    r.doc["reps"] = o.reps;
    r.doc["seed"] = o.seed;

    if (v.ok) {
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> val(-2.0, 2.0);
        double worst = 0.0;
        for (const auto& d : dags)
            for (std::size_t rep = 0; rep < o.reps; ++rep) {
                LinearSem sem = random_sem(d, o.seed + rep, true);
                std::vector<double> xs;
                for (std::size_t i = 0; i < q.x.size(); ++i) xs.push_back(val(rng));
                for (NodeId t : q.y)
                    worst = std::max(worst, std::abs(do_effect(sem, q.x, xs, t) -
                                                     adjusted_estimate(sem, q.x, xs, t, q.z)));
            }
        const bool certified = worst < 1e-8;
        r.doc["certified"] = certified;
        r.doc["max_abs_error"] = worst;
        lines.push_back("verdict: adjustment set");
        lines.push_back("max |do - adjusted| over " + std::to_string(dags.size() * o.reps) +
                        " SEMs: " + std::to_string(worst));
        lines.push_back(certified ? "certified" : "NOT certified: numeric check disagrees");
        return certified ? kYes : kInconsistent;
    }

    for (const auto& d : dags) {
        auto w = adversarial_sem(d, q.x, q.y, q.z, o.seed);
        if (!w) continue;
        const bool certified = std::abs(w->gap()) > 1e-6;
        r.doc["certified"] = certified;
        r.doc["gap"] = w->gap();
        r.doc["case"] = static_cast<int>(w->which);
        r.doc["outcome"] = d.name(w->y);
        r.doc["path"] = path_json(d, w->path);
        r.doc["do_effect"] = w->do_value;
        r.doc["adjusted"] = w->adjusted_value;
        lines.push_back("verdict: not an adjustment set");
        lines.push_back("witness path: " + format_path(d, w->path));
        lines.push_back("E[" + d.name(w->y) + " | do(x=1)] = " + std::to_string(w->do_value) +
                        ", adjusted = " + std::to_string(w->adjusted_value));
        return certified ? kNo : kInconsistent;
    }
    r.doc["certified"] = false;
    lines.push_back("NOT certified: every member dag accepts the set");
    return kInconsistent;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Covariate adjustment sets for DAGs, CPDAGs, MAGs and PAGs"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App* sub, bool with_z) {
        sub->add_option("--graph", opt.graph, "graph file")->required();
        sub->add_option("-x", opt.x, "exposures, comma separated");
        sub->add_option("-y", opt.y, "outcomes, comma separated");
        if (with_z) sub->add_option("-z", opt.z, "covariates, comma separated");
        sub->add_flag("--json", opt.as_json, "structured output");
        sub->add_flag("--timing", opt.timing, "include elapsed time in json output");
    };

    using Handler = int (*)(const Options&, Reporter&, std::vector<std::string>&);
    std::vector<std::pair<CLI::App*, Handler>> subs;
    auto add = [&](const char* name, const char* help, bool with_z, Handler h) {
        CLI::App* s = app.add_subcommand(name, help);
        common(s, with_z);
        subs.push_back({s, h});
        return s;
    };

    add("validate", "parse and validate a graph", false, cmd_validate);
    add("amenable", "amenability of the graph relative to (X,Y)", false, cmd_amenable);
    add("forb", "forbidden set", false, cmd_forb);
    add("adjust", "the set Adjust(X,Y)", false, cmd_adjust);
    auto* check = add("check", "test Z against a criterion", true, cmd_check);
    check->add_option("--criterion", opt.criterion)->check(CLI::IsMember({"gac", "gbc", "bc"}));
    auto* construct = add("construct", "constructive set for a criterion", false, cmd_construct);
    construct->add_option("--criterion", opt.criterion)->check(CLI::IsMember({"gac", "gbc", "bc"}));
    auto* list = add("list", "list adjustment sets", false, cmd_list);
    list->add_flag("--minimal", opt.minimal, "only inclusion-minimal sets");
    list->add_option("--include", opt.include, "nodes every set must contain");
    list->add_option("--restrict", opt.restrict_to, "nodes sets may use");
    list->add_option("--limit", opt.limit, "stop after this many sets (0: no limit)");
    add("diagnose", "which criteria admit a set, and why not", false, cmd_diagnose);
    add("preprocess-x", "exposures with a proper possibly directed path to Y", false, cmd_preprocess);
    add("msep", "m-separation of X and Y given Z", true, cmd_msep);
    auto* orient = add("orient", "orient a cpdag or pag into a member dag or mag", false, cmd_orient);
    orient->add_option("--avoid-into", opt.avoid_into, "node no circle edge may point into");
    auto* sem = add("sem-verify", "check a verdict numerically on linear SEMs", true, cmd_sem_verify);
    sem->add_option("--seed", opt.seed, "random seed");
    sem->add_option("--reps", opt.reps, "number of random models");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : kInputError;
    }

    for (auto& [s, handler] : subs) {
        if (!s->parsed()) continue;
        Reporter rep{out, opt, {}};
        std::vector<std::string> lines;
        try {
            auto t0 = std::chrono::steady_clock::now();
            int code = handler(opt, rep, lines);
            auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            rep.finish(lines, ms);
            return code;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return kInputError;
        }
    }
    return kInputError;
}

} // namespace adjset
