#pragma once
// Canonical forms of quivers up to relabeling and (optionally) global
// direction reversal. Uses iterated color refinement plus individualization
// backtracking; the canonical representative is the relabeling with the
// lexicographically smallest arc encoding.

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qd/quiver.hpp"

namespace qd {

struct CanonicalQuiver {
    Quiver quiver;               // relabeled to node ids 0..n-1
    bool reversal_applied = false;
    std::vector<NodeId> order;   // order[i] = original node given new id i
    std::string key;             // equality <=> isomorphism (per flags)

    friend bool operator==(const CanonicalQuiver& a, const CanonicalQuiver& b) {
        return a.key == b.key;
    }
    friend bool operator<(const CanonicalQuiver& a, const CanonicalQuiver& b) {
        return a.key < b.key;
    }
};

namespace detail {

// One refinement round: re-color nodes by (current color, multiset of
// (direction, mult, neighbor color)) until the partition stabilizes.
inline std::map<NodeId, int> refine_colors(const Quiver& q,
                                           std::map<NodeId, int> color) {
    const auto arcs = q.arcs();
    for (;;) {
        std::map<NodeId, std::vector<std::vector<int>>> sig;
        for (NodeId v : q.nodes()) sig[v] = {{color[v]}};
        for (const Arc& a : arcs) {
            sig[a.src].push_back({1, a.mult, color[a.dst]});
            sig[a.dst].push_back({2, a.mult, color[a.src]});
        }
        std::map<std::vector<std::vector<int>>, int> rank;
        for (auto& [v, s] : sig) {
            std::sort(s.begin() + 1, s.end());
            rank[s] = 0;
        }
        int next = 0;
        for (auto& [s, r] : rank) r = next++;
        std::map<NodeId, int> fresh;
        for (auto& [v, s] : sig) fresh[v] = rank[s];
        if (fresh == color) return color;
        color = std::move(fresh);
    }
}

inline std::string encode_relabeled(const Quiver& q,
                                    const std::vector<NodeId>& order) {
    std::map<NodeId, int> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = int(i);
    std::vector<Arc> relabeled;
    for (const Arc& a : q.arcs())
        relabeled.push_back({pos[a.src], pos[a.dst], a.mult});
    std::sort(relabeled.begin(), relabeled.end());
    std::string key = std::to_string(order.size());
    for (const Arc& a : relabeled) {
        key += ';';
        key += std::to_string(a.src);
        key += ' ';
        key += std::to_string(a.dst);
        key += ' ';
        key += std::to_string(a.mult);
    }
    return key;
}

struct CanonSearch {
    const Quiver& q;
    std::string best;
    std::vector<NodeId> best_order;
    long leaves = 0;
    long leaf_cap;

    CanonSearch(const Quiver& quiver, long cap) : q(quiver), leaf_cap(cap) {}

    void run(std::map<NodeId, int> color) {
        color = refine_colors(q, color);
        // find the first non-singleton color class in color order
        std::map<int, std::vector<NodeId>> cells;
        for (auto& [v, c] : color) cells[c].push_back(v);
        const std::vector<NodeId>* target = nullptr;
        for (auto& [c, members] : cells) {
            if (members.size() > 1) {
                target = &members;
                break;
            }
        }
        if (!target) {
            if (++leaves > leaf_cap)
                throw std::runtime_error("canonical_form: search blow-up");
            std::vector<std::pair<int, NodeId>> by_color;
            for (auto& [v, c] : color) by_color.push_back({c, v});
            std::sort(by_color.begin(), by_color.end());
            std::vector<NodeId> order;
            for (auto& [c, v] : by_color) order.push_back(v);
            std::string key = encode_relabeled(q, order);
            if (best.empty() || key < best) {
                best = std::move(key);
                best_order = std::move(order);
            }
            return;
        }
        int fresh = int(q.node_count()) + int(cells.size()) + 1;
        for (NodeId v : *target) {
            auto branch = color;
            branch[v] = fresh;  // individualize v, then refine again
            run(std::move(branch));
        }
    }
};

inline CanonicalQuiver canonical_one_direction(const Quiver& q, long leaf_cap) {
    if (q.node_count() == 0) {
        CanonicalQuiver c;
        c.key = "0";
        return c;
    }
    CanonicalQuiver c;
    std::vector<Quiver> comps = q.components();
    if (comps.size() == 1) {
        CanonSearch search(q, leaf_cap);
        std::map<NodeId, int> start;
        for (NodeId v : q.nodes()) start[v] = 0;
        search.run(std::move(start));
        c.order = std::move(search.best_order);
        c.key = std::move(search.best);
    } else {
        // Disconnected input: canonicalize each component on its own and
        // concatenate them in key order. Isolated nodes and repeated copies
        // of a component then add no branching to the search at all.
        std::vector<std::pair<std::string, std::vector<NodeId>>> parts;
        parts.reserve(comps.size());
        for (const Quiver& comp : comps) {
            CanonicalQuiver cc = canonical_one_direction(comp, leaf_cap);
            parts.emplace_back(std::move(cc.key), std::move(cc.order));
        }
        std::sort(parts.begin(), parts.end());
        for (auto& [part_key, part_order] : parts)
            c.order.insert(c.order.end(), part_order.begin(), part_order.end());
        c.key = encode_relabeled(q, c.order);
    }
    std::map<NodeId, int> pos;
    for (std::size_t i = 0; i < c.order.size(); ++i) pos[c.order[i]] = int(i);
    for (NodeId v : q.nodes()) c.quiver.add_node(pos[v]);
    for (const Arc& a : q.arcs())
        c.quiver.add_arc(pos[a.src], pos[a.dst], a.mult);
    return c;
}

}  // namespace detail

// Canonical form. With allow_reversal the representative is the smaller of
// the forms of q and of reversed(q); the flag records whether the reversed
// direction won. leaf_cap guards against pathological symmetric inputs.
inline CanonicalQuiver canonical_form(const Quiver& q, bool allow_reversal,
                                      long leaf_cap = 200000) {
    CanonicalQuiver fwd = detail::canonical_one_direction(q, leaf_cap);
    if (!allow_reversal) return fwd;
    CanonicalQuiver rev =
        detail::canonical_one_direction(q.reversed(), leaf_cap);
    if (rev.key < fwd.key) {
        rev.reversal_applied = true;
        return rev;
    }
    return fwd;
}

// Convenience: isomorphism keys.
inline std::string iso_key(const Quiver& q, bool allow_reversal = false) {
    return canonical_form(q, allow_reversal).key;
}

inline bool isomorphic(const Quiver& a, const Quiver& b,
                       bool allow_reversal = false) {
    return iso_key(a, allow_reversal) == iso_key(b, allow_reversal);
}

}  // namespace qd
