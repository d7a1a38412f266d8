#pragma once
// Ground-truth machinery: exhaustive block-decomposition search over the
// gluing rules, quiver mutation with bounded mutation-class exploration,
// and catalog generation (decomposable degree-3/degree-4 neighborhoods,
// components with more than one decomposition).
//
// The searcher is deficiency-directed: it repeatedly finds the most
// constrained unsatisfied demand (a stray block arc awaiting its
// annihilation partner, a target pair whose arcs are not yet reproduced,
// or an uncovered node) and branches only over placements that can serve
// that demand, after statically discarding placements that can never sit
// inside a valid cover. Results are deduplicated as block multisets, so
// enumeration is complete up to block permutation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "qd/blocks.hpp"
#include "qd/canonical.hpp"
#include "qd/quiver.hpp"

namespace qd {

struct SearchLimits {
    int max_blocks = 0;          // 0 = |nodes| (always sufficient)
    long max_states = 2000000;   // search-tree node budget
};

struct OracleResult {
    bool complete = false;       // search finished within limits
    std::vector<Decomposition> decs;
    long states = 0;

    bool decomposable() const { return !decs.empty(); }
};

namespace detail {

// All distinct placements (normalized) of every block type on the node set,
// in deterministic order: by type, then by assignment tuple.
inline std::vector<PlacedBlock> all_placements(const std::vector<NodeId>& ns) {
    std::vector<PlacedBlock> out;
    for (BlockType t : {BlockType::I, BlockType::II, BlockType::IIIa,
                        BlockType::IIIb, BlockType::IV, BlockType::V}) {
        const BlockTemplate& tpl = block_template(t);
        if (int(ns.size()) < tpl.slots) continue;
        std::set<std::vector<NodeId>> seen;
        std::vector<PlacedBlock> local;
        std::vector<NodeId> assign;
        std::vector<bool> used(ns.size(), false);
        std::function<void()> build = [&]() {
            if (int(assign.size()) == tpl.slots) {
                PlacedBlock b = PlacedBlock::make(t, assign);
                if (seen.insert(b.nodes).second) local.push_back(b);
                return;
            }
            for (std::size_t i = 0; i < ns.size(); ++i) {
                if (used[i]) continue;
                used[i] = true;
                assign.push_back(ns[i]);
                build();
                assign.pop_back();
                used[i] = false;
            }
        };
        build();
        std::sort(local.begin(), local.end());
        out.insert(out.end(), local.begin(), local.end());
    }
    return out;
}

// Placements whose every arc is individually compatible with the target
// graph: an arc on an occupied pair must follow that pair's direction, and
// an arc on a vacant pair must join two outlet slots (its only future is
// annihilating against a partner block).  These are exactly the per-arc
// conditions of the static screen below, applied during enumeration so the
// assignment tree hugs the actual adjacency instead of sweeping every node
// tuple; the post-screen pool is unchanged.
inline std::vector<PlacedBlock> placements_compatible(
    const Quiver& q, const std::vector<NodeId>& ns) {
    std::vector<PlacedBlock> out;
    std::map<std::pair<NodeId, NodeId>, Arc> target;
    std::map<NodeId, int> pairs_at;  // distinct occupied pairs per node
    for (const Arc& a : q.arcs()) {
        auto k = std::minmax(a.src, a.dst);
        target[{k.first, k.second}] = a;
        ++pairs_at[a.src];
        ++pairs_at[a.dst];
    }
    for (BlockType t : {BlockType::I, BlockType::II, BlockType::IIIa,
                        BlockType::IIIb, BlockType::IV, BlockType::V}) {
        const BlockTemplate& tpl = block_template(t);
        if (int(ns.size()) < tpl.slots) continue;
        std::vector<std::vector<std::pair<int, int>>> checks(tpl.slots);
        std::vector<int> arcs_per_slot(tpl.slots, 0);
        for (auto [sa, sb] : tpl.arcs) {
            checks[std::max(sa, sb)].push_back({sa, sb});
            ++arcs_per_slot[sa];
            ++arcs_per_slot[sb];
        }
        // A dangling arc at node w lives or dies with a cancelling partner
        // that shares w at a white slot joined to the arc's other end; no
        // template offers more than arcs_per_slot+1 target pairs that way.
        auto dangling_ok = [&](int slot, NodeId w) {
            auto it = pairs_at.find(w);
            return it == pairs_at.end() || it->second <= arcs_per_slot[slot] + 1;
        };
        std::set<std::vector<NodeId>> seen;
        std::vector<PlacedBlock> local;
        std::vector<NodeId> assign;
        std::vector<bool> used(ns.size(), false);
        std::function<void()> build = [&]() {
            const int depth = int(assign.size());
            if (depth == tpl.slots) {
                PlacedBlock b = PlacedBlock::make(t, assign);
                if (seen.insert(b.nodes).second) local.push_back(b);
                return;
            }
            for (std::size_t i = 0; i < ns.size(); ++i) {
                if (used[i]) continue;
                assign.push_back(ns[i]);
                bool ok = true;
                for (auto [sa, sb] : checks[depth]) {
                    NodeId x = assign[sa], y = assign[sb];
                    auto k = std::minmax(x, y);
                    auto it = target.find({k.first, k.second});
                    if (it != target.end()) {
                        if (it->second.src != x) {
                            ok = false;
                            break;
                        }
                    } else if (!tpl.white[sa] || !tpl.white[sb] ||
                               !dangling_ok(sa, x) || !dangling_ok(sb, y)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    used[i] = true;
                    build();
                    used[i] = false;
                }
                assign.pop_back();
            }
        };
        build();
        std::sort(local.begin(), local.end());
        out.insert(out.end(), local.begin(), local.end());
    }
    return out;
}

}  // namespace detail

// Exhaustive decomposition search. Within limits: returns every
// decomposition (up to block permutation) when want_all, else stops at the
// first. complete=false means the budget was hit (distinct from "none").
inline OracleResult brute_force_decompose(const Quiver& q,
                                          SearchLimits limits = {},
                                          bool want_all = true) {
    OracleResult res;
    const std::vector<NodeId> ns(q.nodes().begin(), q.nodes().end());
    const int max_blocks =
        limits.max_blocks > 0 ? limits.max_blocks : std::max<int>(1, int(ns.size()));
    const std::vector<PlacedBlock> cand = detail::placements_compatible(q, ns);

    using PairKey = std::pair<NodeId, NodeId>;
    auto key_of = [](NodeId a, NodeId b) {
        auto k = std::minmax(a, b);
        return PairKey{k.first, k.second};
    };

    std::map<PairKey, Arc> target;                       // unordered key -> arc
    std::map<NodeId, std::map<PairKey, int>> target_at;  // node -> (src,dst) -> mult
    for (const Arc& a : q.arcs()) {
        target[key_of(a.src, a.dst)] = a;
        target_at[a.src][{a.src, a.dst}] = a.mult;
        target_at[a.dst][{a.src, a.dst}] = a.mult;
    }

    auto white_at = [](const PlacedBlock& b, NodeId v) {
        const BlockTemplate& tpl = block_template(b.type);
        for (int s = 0; s < tpl.slots; ++s)
            if (b.nodes[s] == v) return tpl.white[s];
        return false;
    };
    using NetVec = std::vector<std::pair<PairKey, int>>;  // ordered pair -> count
    auto net_add = [](NetVec& m, PairKey p, int c) {
        for (auto& e : m)
            if (e.first == p) {
                e.second += c;
                return;
            }
        m.push_back({p, c});
    };
    auto net_at = [&](const PlacedBlock& b, NodeId v) {
        NetVec m;
        for (const Arc& a : b.arcs())
            if (a.src == v || a.dst == v) net_add(m, {a.src, a.dst}, 1);
        return m;
    };
    // Does the positive net (after cancelling opposite arcs) equal the
    // target arcs around v, pair for pair and count for count?
    auto net_matches_target = [&](const NetVec& m, NodeId v) {
        auto want = target_at.find(v);
        const std::size_t need = want == target_at.end() ? 0 : want->second.size();
        std::size_t hits = 0;
        for (const auto& [p, c] : m) {
            int r = 0;
            for (const auto& [pr, cr] : m)
                if (pr.first == p.second && pr.second == p.first) {
                    r = cr;
                    break;
                }
            if (c <= r) continue;
            if (want == target_at.end()) return false;
            auto it = want->second.find(p);
            if (it == want->second.end() || it->second != c - r) return false;
            ++hits;
        }
        return hits == need;
    };

    // Static screen. An arc laid against a target arc's direction can never
    // survive: cancelling it would put a third arc on the pair. An arc on a
    // pair the target lacks must annihilate against a partner block later,
    // which is impossible when either endpoint is exclusively owned. And an
    // exclusively owned node admits no second block at all, so its block
    // must reproduce every incident target arc by itself.
    std::vector<char> alive(cand.size(), 1);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const PlacedBlock& b = cand[i];
        bool ok = true;
        for (const Arc& a : b.arcs()) {
            auto t = target.find(key_of(a.src, a.dst));
            if (t != target.end()) {
                if (t->second.src != a.src) { ok = false; break; }
            } else if (!white_at(b, a.src) || !white_at(b, a.dst)) {
                ok = false;
                break;
            } else {
                // The cancelling partner holds both endpoints at white
                // slots joined by a template arc; no such slot pair carries
                // more than three arcs at either end, so this block plus
                // its partner serve at most arcs_b(w)+1 target pairs at w.
                for (NodeId w : {a.src, a.dst}) {
                    int own = 0;
                    for (const Arc& c : b.arcs())
                        if (c.src == w || c.dst == w) ++own;
                    auto wt = target_at.find(w);
                    const std::size_t pairs =
                        wt == target_at.end() ? 0 : wt->second.size();
                    if (pairs > std::size_t(own) + 1) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
        }
        for (std::size_t s = 0; ok && s < b.nodes.size(); ++s) {
            NodeId v = b.nodes[s];
            if (white_at(b, v)) continue;
            if (!net_matches_target(net_at(b, v), v)) ok = false;
        }
        alive[i] = ok ? 1 : 0;
    }

    // A dangling arc pins down its future: the cancelling partner shares
    // both endpoints, so those nodes end up covered by exactly this block
    // pair, which must then reproduce the target around every node the two
    // blocks share. Placements whose dangling arcs have no surviving
    // partner are dropped, iterated to a fixpoint.
    auto has_node = [](const PlacedBlock& b, NodeId v) {
        return std::find(b.nodes.begin(), b.nodes.end(), v) != b.nodes.end();
    };
    auto pair_exact = [&](const PlacedBlock& x, const PlacedBlock& y) {
        for (NodeId w : x.nodes) {
            if (!has_node(y, w)) continue;
            if (!white_at(x, w) || !white_at(y, w)) return false;
            NetVec m = net_at(x, w);
            for (const auto& [p, c] : net_at(y, w)) net_add(m, p, c);
            if (!net_matches_target(m, w)) return false;
        }
        return true;
    };

    std::map<PairKey, std::vector<int>> by_arc;  // ordered (src,dst) -> ids
    for (std::size_t i = 0; i < cand.size(); ++i)
        if (alive[i])
            for (const Arc& a : cand[i].arcs())
                by_arc[{a.src, a.dst}].push_back(int(i));

    std::vector<std::map<PairKey, std::vector<int>>> partners(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (!alive[i]) continue;
        for (const Arc& a : cand[i].arcs()) {
            PairKey k = key_of(a.src, a.dst);
            if (target.count(k)) continue;
            std::vector<int> lst;
            if (auto it = by_arc.find({a.dst, a.src}); it != by_arc.end())
                for (int j : it->second)
                    if (pair_exact(cand[i], cand[j])) lst.push_back(j);
            partners[i][k] = std::move(lst);
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (!alive[i]) continue;
            for (const auto& [k, lst] : partners[i]) {
                bool any = false;
                for (int j : lst)
                    if (alive[j]) { any = true; break; }
                if (!any) {
                    alive[i] = 0;
                    changed = true;
                    break;
                }
            }
        }
    }

    // demand indices over surviving placements
    std::map<PairKey, std::vector<int>> by_pair;
    std::map<NodeId, std::vector<int>> by_node;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (!alive[i]) continue;
        for (const Arc& a : cand[i].arcs())
            by_pair[key_of(a.src, a.dst)].push_back(int(i));
        for (NodeId v : cand[i].nodes) by_node[v].push_back(int(i));
    }

    std::set<std::vector<int>> visited;
    std::vector<int> chosen;
    std::map<NodeId, std::vector<int>> occ;    // node -> chosen ids covering it
    std::map<PairKey, std::vector<Arc>> laid;  // unordered pair -> arcs laid
    bool done = false;

    auto can_add = [&](int ci) {
        const PlacedBlock& b = cand[ci];
        for (NodeId v : b.nodes) {
            auto it = occ.find(v);
            if (it == occ.end() || it->second.empty()) continue;
            if (it->second.size() >= 2) return false;
            if (!white_at(b, v) || !white_at(cand[it->second[0]], v))
                return false;
        }
        for (const Arc& a : b.arcs()) {
            PairKey k = key_of(a.src, a.dst);
            auto pit = laid.find(k);
            std::size_t have = pit == laid.end() ? 0 : pit->second.size();
            if (have >= 2) return false;
            auto t = target.find(k);
            if (t != target.end()) {
                // direction already matches by the static screen; a second
                // copy is only legal on a doubled target arc
                if (have == 1 && t->second.mult != 2) return false;
            } else if (have == 1) {
                if (pit->second[0].src == a.src) return false;  // doubles an empty pair
            } else {
                // fresh dangling arc: the cancelling partner still needs a
                // seat at both endpoints
                auto ou = occ.find(a.src);
                auto ov = occ.find(a.dst);
                if ((ou != occ.end() && !ou->second.empty()) ||
                    (ov != occ.end() && !ov->second.empty()))
                    return false;
            }
        }
        return true;
    };
    auto apply = [&](int ci) {
        for (NodeId v : cand[ci].nodes) occ[v].push_back(ci);
        for (const Arc& a : cand[ci].arcs())
            laid[key_of(a.src, a.dst)].push_back(a);
        chosen.push_back(ci);
    };
    auto undo = [&](int ci) {
        chosen.pop_back();
        for (NodeId v : cand[ci].nodes) {
            auto it = occ.find(v);
            it->second.pop_back();
            if (it->second.empty()) occ.erase(it);
        }
        for (const Arc& a : cand[ci].arcs()) {
            auto it = laid.find(key_of(a.src, a.dst));
            it->second.pop_back();
            if (it->second.empty()) laid.erase(it);
        }
    };

    // Returns the candidate ids serving the most constrained unsatisfied
    // demand (dangling arc, then thinnest unmet target arc, then untouched
    // node), or nullopt when the multiset already reproduces q exactly.
    auto next_moves = [&]() -> std::optional<std::vector<int>> {
        for (const auto& [k, lst] : laid) {
            if (lst.size() != 1 || target.count(k)) continue;
            const Arc& a = lst[0];
            int creator = -1;
            for (int ci : chosen) {
                for (const Arc& c : cand[ci].arcs())
                    if (c.src == a.src && c.dst == a.dst) { creator = ci; break; }
                if (creator >= 0) break;
            }
            std::vector<int> moves;
            if (auto it = partners[creator].find(k); it != partners[creator].end())
                for (int j : it->second)
                    if (alive[j]) moves.push_back(j);
            return moves;
        }
        const std::vector<int>* best = nullptr;
        for (const auto& [k, want] : target) {
            auto it = laid.find(k);
            std::size_t have = it == laid.end() ? 0 : it->second.size();
            if (int(have) == want.mult) continue;
            auto bp = by_pair.find(k);
            if (bp == by_pair.end()) return std::vector<int>{};
            if (!best || bp->second.size() < best->size()) best = &bp->second;
        }
        if (best) return *best;
        for (NodeId v : ns) {
            if (occ.count(v)) continue;
            auto bn = by_node.find(v);
            if (bn == by_node.end()) return std::vector<int>{};
            return bn->second;
        }
        return std::nullopt;
    };

    auto record = [&]() {
        std::vector<PlacedBlock> placed;
        for (int ci : chosen) placed.push_back(cand[ci]);
        std::sort(placed.begin(), placed.end());
        GlueResult g = glue(placed);
        if (g.ok && g.quiver == q) {
            res.decs.push_back(g.dec);
            if (!want_all) done = true;
        }
    };

    std::function<void()> rec = [&]() {
        if (done) return;
        std::vector<int> key = chosen;
        std::sort(key.begin(), key.end());
        if (!visited.insert(key).second) return;
        if (++res.states > limits.max_states) {
            done = true;
            res.complete = false;
            return;
        }
        auto moves = next_moves();
        if (!moves) {
            if (!chosen.empty()) record();
            return;
        }
        if (int(chosen.size()) >= max_blocks) return;
        for (int ci : *moves) {
            int copies = int(std::count(chosen.begin(), chosen.end(), ci));
            if (copies >= 2) continue;
            if (!can_add(ci)) continue;
            apply(ci);
            rec();
            undo(ci);
            if (done) return;
        }
    };

    res.complete = true;
    rec();
    if (res.states > limits.max_states) res.complete = false;
    std::sort(res.decs.begin(), res.decs.end(),
              [](const Decomposition& a, const Decomposition& b) {
                  return a.placed < b.placed;
              });
    return res;
}

// ---------------------------------------------------------------------------
// Mutation

// Standard exchange-matrix mutation at node k:
// B'[i][j] = -B[i][j] if k in {i,j}, else B[i][j] + sgn(B[i][k]) * max(0, B[i][k]*B[k][j]).
inline std::optional<Quiver> mutate(const Quiver& q, NodeId k) {
    if (!q.has_node(k)) return std::nullopt;
    ExchangeMatrix m = to_exchange_matrix(q);
    std::size_t ki = 0;
    for (std::size_t i = 0; i < m.index.size(); ++i)
        if (m.index[i] == k) ki = i;
    const std::size_t n = m.index.size();
    std::vector<std::vector<int>> nb(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == ki || j == ki) {
                nb[i][j] = -m.b[i][j];
            } else {
                int s = m.b[i][ki] > 0 ? 1 : (m.b[i][ki] < 0 ? -1 : 0);
                nb[i][j] = m.b[i][j] + s * std::max(0, m.b[i][ki] * m.b[ki][j]);
            }
        }
    return from_exchange_matrix(nb, &m.index);
}

struct ExplorationReport {
    enum class Status { Finite, LimitExceeded, Mult3Found };
    Status status = Status::Finite;
    long class_size = 0;   // canonical forms seen (valid when Finite)
    long explored = 0;     // states expanded
    std::optional<Quiver> witness;  // for Mult3Found
};

inline ExplorationReport explore_mutation_class(const Quiver& q,
                                                long max_states = 10000) {
    ExplorationReport rep;
    auto has_mult3 = [](const Quiver& x) {
        for (const Arc& a : x.arcs())
            if (a.mult >= 3) return true;
        return false;
    };
    if (has_mult3(q)) {
        rep.status = ExplorationReport::Status::Mult3Found;
        rep.witness = q;
        return rep;
    }
    // Exact (label-preserving) fingerprint of a state.  Mutating at the same
    // node twice, or at two non-adjacent nodes in either order, reproduces a
    // state byte-for-byte, so this set filters most repeats before the much
    // more expensive canonical key is computed.
    auto labeled_key = [](const Quiver& x) {
        std::vector<std::array<int, 3>> t;
        t.reserve(x.arcs().size());
        for (const Arc& a : x.arcs()) t.push_back({int(a.src), int(a.dst), a.mult});
        std::sort(t.begin(), t.end());
        std::string s;
        s.reserve(t.size() * 6);
        for (const auto& e : t)
            for (int v : e) {
                s.push_back(char(v & 0xff));
                s.push_back(char((v >> 8) & 0xff));
            }
        return s;
    };
    // A canonical-search blow-up on one state means the class cannot be
    // finished within resource limits; report that rather than crash.
    auto give_up = [&rep](long size) {
        rep.status = ExplorationReport::Status::LimitExceeded;
        rep.class_size = size;
        return rep;
    };
    std::set<std::string> seen;
    try {
        seen.insert(iso_key(q, false));
    } catch (const std::exception&) {
        return give_up(0);
    }
    std::unordered_set<std::string> seen_labeled{labeled_key(q)};
    std::deque<Quiver> frontier{q};
    while (!frontier.empty()) {
        Quiver cur = frontier.front();
        frontier.pop_front();
        ++rep.explored;
        for (NodeId k : cur.nodes()) {
            Quiver next = *mutate(cur, k);
            if (has_mult3(next)) {
                rep.status = ExplorationReport::Status::Mult3Found;
                rep.witness = next;
                return rep;
            }
            if (!seen_labeled.insert(labeled_key(next)).second) continue;
            std::string key;
            try {
                key = iso_key(next, false);
            } catch (const std::exception&) {
                return give_up(long(seen.size()));
            }
            if (seen.insert(key).second) {
                if (long(seen.size()) > max_states) {
                    rep.status = ExplorationReport::Status::LimitExceeded;
                    rep.class_size = long(seen.size());
                    return rep;
                }
                frontier.push_back(std::move(next));
            }
        }
    }
    rep.status = ExplorationReport::Status::Finite;
    rep.class_size = long(seen.size());
    return rep;
}

// ---------------------------------------------------------------------------
// Catalog generation: exhaustive scan over small quivers.

enum class CatalogKind { Degree3, Degree4, NonUnique };

struct CatalogEntry {
    std::string key;              // canonical form (no reversal folding)
    Quiver representative;        // canonically relabeled
    int dec_count = 0;
    std::vector<Decomposition> decs;  // on the representative's node ids
};

struct Catalog {
    CatalogKind kind = CatalogKind::Degree3;
    int max_nodes = 0;
    bool complete = true;
    std::vector<CatalogEntry> entries;  // sorted by key
};

namespace detail {

// Visits every connected quiver (up to isomorphism, fixed direction) on
// 2..max_nodes nodes with multiplicities <= 2.
template <typename Fn>
inline void for_each_connected_quiver(int max_nodes, Fn&& fn) {
    for (int n = 2; n <= max_nodes; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
        const std::size_t np = pairs.size();
        std::vector<int> state(np, 0);  // 0 none, 1 i->j, 2 j->i, 3 i=>j, 4 j=>i
        std::set<std::string> seen;
        for (;;) {
            Quiver q;
            for (int v = 0; v < n; ++v) q.add_node(v);
            for (std::size_t p = 0; p < np; ++p) {
                auto [i, j] = pairs[p];
                switch (state[p]) {
                    case 1: q.add_arc(i, j, 1); break;
                    case 2: q.add_arc(j, i, 1); break;
                    case 3: q.add_arc(i, j, 2); break;
                    case 4: q.add_arc(j, i, 2); break;
                    default: break;
                }
            }
            if (q.components().size() == 1) {
                CanonicalQuiver c = canonical_form(q, false);
                if (seen.insert(c.key).second) fn(c);
            }
            std::size_t p = 0;
            while (p < np && state[p] == 4) state[p++] = 0;
            if (p == np) break;
            ++state[p];
        }
    }
}

}  // namespace detail

inline Catalog generate_catalog(CatalogKind kind, int max_nodes = 0,
                                SearchLimits limits = {}) {
    Catalog cat;
    cat.kind = kind;
    cat.max_nodes = max_nodes > 0 ? max_nodes
                    : (kind == CatalogKind::Degree3 ? 4 : 5);
    detail::for_each_connected_quiver(cat.max_nodes, [&](const CanonicalQuiver& c) {
        const Quiver& q = c.quiver;
        if (kind == CatalogKind::Degree3 || kind == CatalogKind::Degree4) {
            const int want = kind == CatalogKind::Degree3 ? 3 : 4;
            bool hit = false;
            for (NodeId v : q.nodes())
                if (q.degree(v) == want) hit = true;
            if (!hit) return;
        }
        OracleResult r = brute_force_decompose(q, limits, true);
        if (!r.complete) {
            cat.complete = false;
            return;
        }
        const bool keep = kind == CatalogKind::NonUnique ? r.decs.size() >= 2
                                                         : !r.decs.empty();
        if (!keep) return;
        CatalogEntry e;
        e.key = c.key;
        e.representative = q;
        e.dec_count = int(r.decs.size());
        e.decs = std::move(r.decs);
        cat.entries.push_back(std::move(e));
    });
    std::sort(cat.entries.begin(), cat.entries.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) {
                  return a.key < b.key;
              });
    return cat;
}

// Line-oriented catalog serialization; bit-exact for equal inputs.
inline std::string emit_catalog(const Catalog& cat) {
    std::ostringstream out;
    const char* kind = cat.kind == CatalogKind::Degree3    ? "degree3"
                       : cat.kind == CatalogKind::Degree4 ? "degree4"
                                                          : "nonunique";
    out << "qdcatalog 1 " << kind << " max_nodes=" << cat.max_nodes
        << " entries=" << cat.entries.size()
        << (cat.complete ? "" : " incomplete") << "\n";
    for (const CatalogEntry& e : cat.entries) {
        out << e.key << " | decs=" << e.dec_count << " |";
        for (const Decomposition& d : e.decs) {
            out << " [";
            for (std::size_t i = 0; i < d.placed.size(); ++i) {
                if (i) out << " + ";
                out << block_type_name(d.placed[i].type) << "(";
                for (std::size_t s = 0; s < d.placed[i].nodes.size(); ++s) {
                    if (s) out << ",";
                    out << d.placed[i].nodes[s];
                }
                out << ")";
            }
            out << "]";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace qd
