#pragma once
// Core quiver data model: node set plus directed arcs with multiplicity.
// A quiver here is a finite directed multigraph without loops and without
// 2-cycles; parallel arcs are stored as a single Arc with a mult field.
// Provides validation, degrees, components, neighborhood extraction,
// reversal, exchange-matrix conversion and a line-based text format.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qd {

using NodeId = int;

struct Arc {
    NodeId src = 0;
    NodeId dst = 0;
    int mult = 1;

    friend bool operator==(const Arc& a, const Arc& b) {
        return a.src == b.src && a.dst == b.dst && a.mult == b.mult;
    }
    friend bool operator<(const Arc& a, const Arc& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.dst != b.dst) return a.dst < b.dst;
        return a.mult < b.mult;
    }
};

class Quiver {
public:
    Quiver() = default;

    void add_node(NodeId v) { nodes_.insert(v); }

    // Adds an arc src->dst. Refuses loops, duplicate pairs (which would
    // form a 2-cycle or a parallel bundle) and non-positive multiplicity.
    bool add_arc(NodeId src, NodeId dst, int mult = 1) {
        if (src == dst || mult <= 0) return false;
        if (arcs_.count({src, dst}) || arcs_.count({dst, src})) return false;
        nodes_.insert(src);
        nodes_.insert(dst);
        arcs_[{src, dst}] = mult;
        return true;
    }

    bool remove_arc(NodeId u, NodeId v) {
        if (arcs_.erase({u, v})) return true;
        return arcs_.erase({v, u}) > 0;
    }

    void remove_node(NodeId v) {
        nodes_.erase(v);
        for (auto it = arcs_.begin(); it != arcs_.end();) {
            if (it->first.first == v || it->first.second == v)
                it = arcs_.erase(it);
            else
                ++it;
        }
    }

    bool has_node(NodeId v) const { return nodes_.count(v) > 0; }

    const std::set<NodeId>& nodes() const { return nodes_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    // All arcs sorted by (src, dst).
    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        out.reserve(arcs_.size());
        for (const auto& [key, m] : arcs_)
            out.push_back({key.first, key.second, m});
        return out;
    }

    // The arc between u and v in either direction, if any.
    std::optional<Arc> arc_between(NodeId u, NodeId v) const {
        auto it = arcs_.find({u, v});
        if (it != arcs_.end()) return Arc{u, v, it->second};
        it = arcs_.find({v, u});
        if (it != arcs_.end()) return Arc{v, u, it->second};
        return std::nullopt;
    }

    // Multiplicity of the arc u->v, 0 if absent or reversed.
    int mult_from(NodeId u, NodeId v) const {
        auto it = arcs_.find({u, v});
        return it == arcs_.end() ? 0 : it->second;
    }

    // Degree counts multiplicity: a mult-2 arc contributes 2 at each end.
    int degree(NodeId v) const {
        int d = 0;
        for (const auto& [key, m] : arcs_)
            if (key.first == v || key.second == v) d += m;
        return d;
    }

    int out_degree(NodeId v) const {
        int d = 0;
        for (const auto& [key, m] : arcs_)
            if (key.first == v) d += m;
        return d;
    }

    int in_degree(NodeId v) const {
        int d = 0;
        for (const auto& [key, m] : arcs_)
            if (key.second == v) d += m;
        return d;
    }

    std::vector<NodeId> neighbors(NodeId v) const {
        std::set<NodeId> out;
        for (const auto& [key, m] : arcs_) {
            if (key.first == v) out.insert(key.second);
            if (key.second == v) out.insert(key.first);
        }
        return {out.begin(), out.end()};
    }

    NodeId max_node_id() const {
        return nodes_.empty() ? -1 : *nodes_.rbegin();
    }

    NodeId fresh_node_id() const { return max_node_id() + 1; }

    Quiver reversed() const {
        Quiver r;
        r.nodes_ = nodes_;
        for (const auto& [key, m] : arcs_)
            r.arcs_[{key.second, key.first}] = m;
        return r;
    }

    // Subquiver induced on the given nodes (keeps arcs with both ends inside).
    Quiver induced(const std::set<NodeId>& keep) const {
        Quiver s;
        for (NodeId v : keep)
            if (nodes_.count(v)) s.add_node(v);
        for (const auto& [key, m] : arcs_)
            if (keep.count(key.first) && keep.count(key.second))
                s.arcs_[key] = m;
        return s;
    }

    // Weakly connected components, ordered by smallest contained node id.
    std::vector<Quiver> components() const {
        std::map<NodeId, NodeId> parent;
        for (NodeId v : nodes_) parent[v] = v;
        auto find = [&](NodeId v) {
            while (parent[v] != v) {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            return v;
        };
        for (const auto& [key, m] : arcs_) {
            NodeId a = find(key.first), b = find(key.second);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
        std::map<NodeId, std::set<NodeId>> groups;
        for (NodeId v : nodes_) groups[find(v)].insert(v);
        std::vector<Quiver> out;
        for (const auto& [root, members] : groups)
            out.push_back(induced(members));
        return out;
    }

    friend bool operator==(const Quiver& a, const Quiver& b) {
        return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_;
    }
    friend bool operator!=(const Quiver& a, const Quiver& b) {
        return !(a == b);
    }
    friend bool operator<(const Quiver& a, const Quiver& b) {
        if (a.nodes_ != b.nodes_) return a.nodes_ < b.nodes_;
        return a.arcs_ < b.arcs_;
    }

private:
    std::set<NodeId> nodes_;
    std::map<std::pair<NodeId, NodeId>, int> arcs_;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
    std::vector<std::string> problems;        // structural: not a quiver
    std::vector<std::string> decomposability; // e.g. multiplicity >= 3
    bool is_quiver() const { return problems.empty(); }
    bool mult_at_most_2 = true;
    int max_degree = 0;
};

inline ValidationReport validate(const Quiver& q) {
    ValidationReport r;
    for (const Arc& a : q.arcs()) {
        if (a.src == a.dst)
            r.problems.push_back("loop at node " + std::to_string(a.src));
        if (a.mult >= 3) {
            r.mult_at_most_2 = false;
            r.decomposability.push_back(
                "multiplicity " + std::to_string(a.mult) + " on arc " +
                std::to_string(a.src) + "->" + std::to_string(a.dst) +
                " => undecomposable");
        }
    }
    for (NodeId v : q.nodes())
        r.max_degree = std::max(r.max_degree, q.degree(v));
    return r;
}

// ---------------------------------------------------------------------------
// Neighborhood of a node: spokes, arcs among the boundary nodes, and the
// attachments of boundary nodes to the rest of the parent quiver.

struct Neighborhood {
    NodeId center = 0;
    std::vector<Arc> spokes;         // arcs incident to center
    std::vector<Arc> boundary_arcs;  // arcs among boundary nodes
    std::map<NodeId, std::vector<Arc>> exterior;  // boundary -> outside arcs
    std::map<NodeId, int> boundary_degree;        // degree in the parent
};

inline Neighborhood neighborhood(const Quiver& q, NodeId v) {
    Neighborhood nb;
    nb.center = v;
    std::set<NodeId> boundary;
    for (const Arc& a : q.arcs()) {
        if (a.src == v || a.dst == v) {
            nb.spokes.push_back(a);
            boundary.insert(a.src == v ? a.dst : a.src);
        }
    }
    for (const Arc& a : q.arcs()) {
        if (a.src == v || a.dst == v) continue;
        bool s = boundary.count(a.src) > 0, d = boundary.count(a.dst) > 0;
        if (s && d) {
            nb.boundary_arcs.push_back(a);
        } else if (s) {
            nb.exterior[a.src].push_back(a);
        } else if (d) {
            nb.exterior[a.dst].push_back(a);
        }
    }
    for (NodeId b : boundary) nb.boundary_degree[b] = q.degree(b);
    return nb;
}

// ---------------------------------------------------------------------------
// Exchange matrix conversion. Nodes are indexed in ascending id order.

struct ExchangeMatrix {
    std::vector<NodeId> index;            // row/col i corresponds to index[i]
    std::vector<std::vector<int>> b;      // skew-symmetric
};

inline ExchangeMatrix to_exchange_matrix(const Quiver& q) {
    ExchangeMatrix m;
    m.index.assign(q.nodes().begin(), q.nodes().end());
    std::map<NodeId, int> pos;
    for (std::size_t i = 0; i < m.index.size(); ++i) pos[m.index[i]] = int(i);
    m.b.assign(m.index.size(), std::vector<int>(m.index.size(), 0));
    for (const Arc& a : q.arcs()) {
        m.b[pos[a.src]][pos[a.dst]] = a.mult;
        m.b[pos[a.dst]][pos[a.src]] = -a.mult;
    }
    return m;
}

// Returns nullopt if b is not skew-symmetric with zero diagonal.
inline std::optional<Quiver> from_exchange_matrix(
    const std::vector<std::vector<int>>& b,
    const std::vector<NodeId>* index = nullptr) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (b[i].size() != n) return std::nullopt;
        if (b[i][i] != 0) return std::nullopt;
        for (std::size_t j = 0; j < n; ++j)
            if (b[i][j] != -b[j][i]) return std::nullopt;
    }
    Quiver q;
    for (std::size_t i = 0; i < n; ++i)
        q.add_node(index ? (*index)[i] : NodeId(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (b[i][j] > 0)
                q.add_arc(index ? (*index)[i] : NodeId(i),
                          index ? (*index)[j] : NodeId(j), b[i][j]);
    return q;
}

// ---------------------------------------------------------------------------
// Text format: `SRC DST [MULT]` per arc line, `node ID` for isolated nodes,
// `#` starts a comment. Emission is deterministic: arcs sorted by (src,dst).

struct ParseResult {
    std::optional<Quiver> quiver;
    std::string error;
    int line = 0;
    bool ok() const { return quiver.has_value(); }
};

inline ParseResult parse_quiver(const std::string& text) {
    ParseResult res;
    Quiver q;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank
        auto fail = [&](const std::string& msg) {
            res.error = msg;
            res.line = lineno;
            return res;
        };
        if (first == "node") {
            long long id;
            if (!(ls >> id) || id < 0) return fail("expected `node ID`");
            std::string extra;
            if (ls >> extra) return fail("trailing tokens after node id");
            q.add_node(NodeId(id));
            continue;
        }
        long long src, dst, mult = 1;
        std::istringstream as(line);
        if (!(as >> src >> dst)) return fail("expected `SRC DST [MULT]`");
        if (!(as >> mult)) mult = 1;
        std::string extra;
        if (as >> extra) return fail("trailing tokens after arc");
        if (src < 0 || dst < 0) return fail("node ids must be non-negative");
        if (src == dst) return fail("loop arc not allowed");
        if (mult < 1) return fail("multiplicity must be >= 1");
        if (!q.add_arc(NodeId(src), NodeId(dst), int(mult))) {
            if (q.arc_between(NodeId(src), NodeId(dst)))
                return fail("duplicate arc pair (2-cycle or repeated arc)");
            return fail("invalid arc");
        }
    }
    res.quiver = std::move(q);
    return res;
}

inline std::string emit_quiver(const Quiver& q) {
    std::ostringstream out;
    std::set<NodeId> touched;
    for (const Arc& a : q.arcs()) {
        touched.insert(a.src);
        touched.insert(a.dst);
    }
    for (NodeId v : q.nodes())
        if (!touched.count(v)) out << "node " << v << "\n";
    for (const Arc& a : q.arcs()) {
        out << a.src << " " << a.dst;
        if (a.mult != 1) out << " " << a.mult;
        out << "\n";
    }
    return out.str();
}

}  // namespace qd
