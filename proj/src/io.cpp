#include "adjset/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace adjset {

namespace {

struct EdgeToken {
    std::string_view text;
    Mark left;
    Mark right;
};

// Longest tokens first so "<->" wins over "<-".
constexpr std::array<EdgeToken, 6> kTokens{{
    {"<->", Mark::Arrow, Mark::Arrow},
    {"o-o", Mark::Circle, Mark::Circle},
    {"o->", Mark::Circle, Mark::Arrow},
    {"<-o", Mark::Arrow, Mark::Circle},
    {"->", Mark::Tail, Mark::Arrow},
    {"<-", Mark::Arrow, Mark::Tail},
}};

class LineReader {
public:
    LineReader(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    std::size_t column() const { return pos_ + 1; }

    std::string name() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
        }
        if (start == pos_) fail("node name");
        return std::string(text_.substr(start, pos_ - start));
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("'") + c + "'");
        ++pos_;
    }

    const EdgeToken* edge_token() {
        skip_space();
        for (const auto& t : kTokens)
            if (text_.substr(pos_, t.text.size()) == t.text) {
                pos_ += t.text.size();
                return &t;
            }
        return nullptr;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw ParseError(line_, pos_ + 1, expected);
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

const char* token_for(Mark left, Mark right) {
    for (const auto& t : kTokens)
        if (t.left == left && t.right == right) return t.text.data();
    return nullptr;
}

} // namespace

MixedGraph parse_graph(std::string_view text) {
    std::optional<GraphClass> cls;
    std::vector<std::string> names;
    std::map<std::string, NodeId, std::less<>> index;
    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> pairs;
    std::set<std::string, std::less<>> declared;

    auto node = [&](const std::string& name) {
        auto [it, fresh] = index.emplace(name, static_cast<NodeId>(names.size()));
        if (fresh) names.push_back(name);
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t stop = text.find('\n', start);
        if (stop == std::string_view::npos) stop = text.size();
        std::string_view raw = text.substr(start, stop - start);
        start = stop + 1;
        ++line_no;
        LineReader in(strip_comment(raw), line_no);
        if (in.at_end()) continue;

        if (!cls) {
            if (in.name() != "type") in.fail("'type:' header");
            in.expect(':');
            const std::string kind = in.name();
            if (kind == "dag") cls = GraphClass::Dag;
            else if (kind == "cpdag") cls = GraphClass::Cpdag;
            else if (kind == "mag") cls = GraphClass::Mag;
            else if (kind == "pag") cls = GraphClass::Pag;
            else throw ParseError(line_no, in.column() - kind.size(), "dag, cpdag, mag or pag");
            if (!in.at_end()) in.fail("end of line");
            continue;
        }

        const std::size_t first_col = (in.skip_space(), in.column());
        const std::string first = in.name();
        if (first == "nodes" && in.peek(':')) {
            in.expect(':');
            while (!in.at_end()) {
                const std::size_t col = (in.skip_space(), in.column());
                const std::string n = in.name();
                if (!declared.insert(n).second)
                    throw Error(ErrorKind::DuplicateName, "line " + std::to_string(line_no) + ", column " +
                                                              std::to_string(col) + ": '" + n +
                                                              "' declared twice");
                node(n);
            }
            continue;
        }
        if (in.at_end()) {
            node(first);
            continue;
        }
        const std::size_t token_col = (in.skip_space(), in.column());
        const EdgeToken* tok = in.edge_token();
        if (!tok) in.fail("edge token (->, <-, <->, o-o, o->, <-o)");
        const std::string second = in.name();
        if (!in.at_end()) in.fail("end of line");

        const NodeId a = node(first);
        const NodeId b = node(second);
        if (a == b)
            throw Error(ErrorKind::SelfLoop, "line " + std::to_string(line_no) + ", column " +
                                                 std::to_string(first_col) + ": self-loop at '" +
                                                 first + "'",
                        {a});
        const Edge e = Edge{a, b, tok->left, tok->right}.canonical();
        const auto key = std::make_pair(e.a, e.b);
        // Opposite directed edges are a cycle; build_graph reports that.
        const bool reversed = pairs.count(key) && e.is_directed() &&
                              std::find(edges.begin(), edges.end(),
                                        Edge{e.a, e.b, e.mark_b, e.mark_a}) != edges.end();
        if (!pairs.insert(key).second && !reversed)
            throw Error(ErrorKind::DuplicateEdge,
                        "line " + std::to_string(line_no) + ", column " + std::to_string(token_col) +
                            ": second edge between '" + first + "' and '" + second + "'",
                        {a, b});
        edges.push_back(e);
    }
    if (!cls) throw ParseError(line_no == 0 ? 1 : line_no, 1, "'type:' header");
    return build_graph(std::move(names), std::move(edges), *cls);
}

std::string serialize_graph(const MixedGraph& g) {
    std::ostringstream out;
    out << "type: " << to_string(g.graph_class()) << '\n';
    out << "nodes:";
    for (const auto& n : g.names()) out << ' ' << n;
    out << '\n';
    for (const auto& e : g.edges())
        out << g.name(e.a) << ' ' << token_for(e.mark_a, e.mark_b) << ' ' << g.name(e.b) << '\n';
    return out.str();
}

MixedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

} // namespace adjset
