#pragma once
// The six block templates, placements, and the gluing engine.
//
// Gluing rules implemented here:
//   1. identification only between white slots of two different blocks;
//      slot assignments are injective within one block
//   2. no node lies in more than two blocks; black slots are never shared
//   3. two coincident same-direction simple arcs merge into one mult-2 arc
//   4. two coincident opposite-direction simple arcs annihilate (both are
//      removed; the pair is recorded)
//
// Block conventions (slot 0 first):
//   I    spike     0 -> 1, both white
//   II   triangle  0 -> 1 -> 2 -> 0, all white
//   IIIa infork    tails 1 -> apex 0 and 2 -> 0; apex white, tails black
//   IIIb outfork   apex 0 -> 1 and 0 -> 2; apex white, heads black
//   IV   diamond   poles 0,1 white, sides 2,3 black; mid 0 -> 1 and two
//                  oriented triangles 0 -> 1 -> side -> 0
//   V    square    center 0 white, corners 1..4 black; spokes 0 -> 1, 0 -> 3,
//                  2 -> 0, 4 -> 0; perimeter 1 -> 2, 1 -> 4, 3 -> 2, 3 -> 4
//                  (four oriented triangles through the center)

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qd/quiver.hpp"

namespace qd {

enum class BlockType { I, II, IIIa, IIIb, IV, V };

inline const char* block_type_name(BlockType t) {
    switch (t) {
        case BlockType::I: return "I";
        case BlockType::II: return "II";
        case BlockType::IIIa: return "IIIa";
        case BlockType::IIIb: return "IIIb";
        case BlockType::IV: return "IV";
        case BlockType::V: return "V";
    }
    return "?";
}

inline std::optional<BlockType> block_type_from_name(const std::string& s) {
    if (s == "I") return BlockType::I;
    if (s == "II") return BlockType::II;
    if (s == "IIIa") return BlockType::IIIa;
    if (s == "IIIb") return BlockType::IIIb;
    if (s == "IV") return BlockType::IV;
    if (s == "V") return BlockType::V;
    return std::nullopt;
}

// Direction mirror: reversing all arcs maps an infork to an outfork and
// conversely; the other templates are self-mirroring up to slot symmetry.
inline BlockType mirror_type(BlockType t) {
    if (t == BlockType::IIIa) return BlockType::IIIb;
    if (t == BlockType::IIIb) return BlockType::IIIa;
    return t;
}

struct BlockTemplate {
    BlockType type;
    int slots;
    std::vector<std::pair<int, int>> arcs;      // slot-index arcs
    std::vector<bool> white;                    // per slot
    std::vector<std::vector<int>> symmetries;   // arc-preserving slot perms
};

inline const BlockTemplate& block_template(BlockType t) {
    static const std::array<BlockTemplate, 6> table = {{
        {BlockType::I, 2, {{0, 1}}, {true, true}, {{0, 1}}},
        {BlockType::II,
         3,
         {{0, 1}, {1, 2}, {2, 0}},
         {true, true, true},
         {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}},
        {BlockType::IIIa,
         3,
         {{1, 0}, {2, 0}},
         {true, false, false},
         {{0, 1, 2}, {0, 2, 1}}},
        {BlockType::IIIb,
         3,
         {{0, 1}, {0, 2}},
         {true, false, false},
         {{0, 1, 2}, {0, 2, 1}}},
        {BlockType::IV,
         4,
         {{0, 1}, {1, 2}, {2, 0}, {1, 3}, {3, 0}},
         {true, true, false, false},
         {{0, 1, 2, 3}, {0, 1, 3, 2}}},
        {BlockType::V,
         5,
         {{0, 1}, {0, 3}, {2, 0}, {4, 0}, {1, 2}, {1, 4}, {3, 2}, {3, 4}},
         {true, false, false, false, false},
         {{0, 1, 2, 3, 4},
          {0, 3, 2, 1, 4},
          {0, 1, 4, 3, 2},
          {0, 3, 4, 1, 2}}},
    }};
    return table[static_cast<int>(t)];
}

// Standalone quiver of one block on node ids 0..slots-1.
inline Quiver block_quiver(BlockType t) {
    const BlockTemplate& tpl = block_template(t);
    Quiver q;
    for (int s = 0; s < tpl.slots; ++s) q.add_node(s);
    for (auto [a, b] : tpl.arcs) q.add_arc(a, b, 1);
    return q;
}

// A block placed onto concrete nodes; nodes[i] hosts slot i. Stored in the
// symmetry-normalized form so equal placements compare equal.
struct PlacedBlock {
    BlockType type = BlockType::I;
    std::vector<NodeId> nodes;

    static PlacedBlock make(BlockType t, std::vector<NodeId> assignment) {
        PlacedBlock b;
        b.type = t;
        b.nodes = std::move(assignment);
        b.normalize();
        return b;
    }

    void normalize() {
        const BlockTemplate& tpl = block_template(type);
        std::vector<NodeId> best = nodes;
        for (const auto& perm : tpl.symmetries) {
            std::vector<NodeId> cand(nodes.size());
            for (std::size_t s = 0; s < nodes.size(); ++s)
                cand[s] = nodes[perm[s]];
            if (cand < best) best = std::move(cand);
        }
        nodes = std::move(best);
    }

    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        for (auto [a, b] : block_template(type).arcs)
            out.push_back({nodes[a], nodes[b], 1});
        return out;
    }

    bool white_at(NodeId v) const {
        const BlockTemplate& tpl = block_template(type);
        for (std::size_t s = 0; s < nodes.size(); ++s)
            if (nodes[s] == v && tpl.white[s]) return true;
        return false;
    }

    bool contains(NodeId v) const {
        for (NodeId n : nodes)
            if (n == v) return true;
        return false;
    }

    friend bool operator==(const PlacedBlock& a, const PlacedBlock& b) {
        return a.type == b.type && a.nodes == b.nodes;
    }
    friend bool operator<(const PlacedBlock& a, const PlacedBlock& b) {
        if (a.type != b.type) return a.type < b.type;
        return a.nodes < b.nodes;
    }
};

// Mirror of a placement under global direction reversal: the same nodes
// carry the block whose arcs are all reversed. An infork becomes the
// outfork on the same apex/tails; the other templates map to themselves
// with slots permuted (spike endpoints swap, the triangle cycle reverses,
// the diamond poles swap, the star's corner pairs swap).
inline PlacedBlock mirror_block(const PlacedBlock& b) {
    static const std::vector<int> kPerm[6] = {
        {1, 0},           // I
        {0, 2, 1},        // II
        {0, 1, 2},        // IIIa
        {0, 1, 2},        // IIIb
        {1, 0, 2, 3},     // IV
        {0, 2, 1, 4, 3},  // V
    };
    const std::vector<int>& p = kPerm[static_cast<int>(b.type)];
    std::vector<NodeId> ns(b.nodes.size());
    for (std::size_t s = 0; s < ns.size(); ++s) ns[s] = b.nodes[p[s]];
    return PlacedBlock::make(mirror_type(b.type), std::move(ns));
}

struct Annihilation {
    int block_a = 0;  // index into Decomposition::placed
    Arc arc_a;
    int block_b = 0;
    Arc arc_b;

    friend bool operator==(const Annihilation& x, const Annihilation& y) {
        return x.block_a == y.block_a && x.block_b == y.block_b &&
               x.arc_a == y.arc_a && x.arc_b == y.arc_b;
    }
    friend bool operator<(const Annihilation& x, const Annihilation& y) {
        if (x.block_a != y.block_a) return x.block_a < y.block_a;
        if (x.block_b != y.block_b) return x.block_b < y.block_b;
        if (!(x.arc_a == y.arc_a)) return x.arc_a < y.arc_a;
        return x.arc_b < y.arc_b;
    }
};

struct Decomposition {
    std::vector<PlacedBlock> placed;
    std::vector<Annihilation> annihilations;
};

enum class GlueError {
    None,
    BadSlotCount,
    NonInjective,
    CoverageExceeded,
    BlackShared,
    MultTooHigh,
    ResidualTwoCycle,
};

struct GlueResult {
    bool ok = false;
    GlueError error = GlueError::None;
    std::string message;
    Quiver quiver;
    Decomposition dec;
};

inline GlueResult glue(const std::vector<PlacedBlock>& placed) {
    GlueResult res;
    auto fail = [&](GlueError e, std::string msg) {
        res.ok = false;
        res.error = e;
        res.message = std::move(msg);
        return res;
    };

    for (std::size_t i = 0; i < placed.size(); ++i) {
        const PlacedBlock& b = placed[i];
        const BlockTemplate& tpl = block_template(b.type);
        if (int(b.nodes.size()) != tpl.slots)
            return fail(GlueError::BadSlotCount,
                        "block " + std::to_string(i) + " has wrong arity");
        std::set<NodeId> distinct(b.nodes.begin(), b.nodes.end());
        if (int(distinct.size()) != tpl.slots)
            return fail(GlueError::NonInjective,
                        "block " + std::to_string(i) +
                            " assigns two slots to one node");
    }

    // rule 2: coverage and colors
    std::map<NodeId, std::vector<std::pair<int, bool>>> cover;  // (block, white)
    for (std::size_t i = 0; i < placed.size(); ++i) {
        const PlacedBlock& b = placed[i];
        const BlockTemplate& tpl = block_template(b.type);
        for (int s = 0; s < tpl.slots; ++s)
            cover[b.nodes[s]].push_back({int(i), tpl.white[s]});
    }
    for (const auto& [v, uses] : cover) {
        if (uses.size() > 2)
            return fail(GlueError::CoverageExceeded,
                        "node " + std::to_string(v) + " lies in " +
                            std::to_string(uses.size()) + " blocks");
        if (uses.size() == 2 && (!uses[0].second || !uses[1].second))
            return fail(GlueError::BlackShared,
                        "node " + std::to_string(v) +
                            " shared at a black slot");
    }

    // rules 3 and 4: reconcile coincident arcs per unordered pair
    std::map<std::pair<NodeId, NodeId>, std::vector<std::pair<int, Arc>>> pam;
    for (std::size_t i = 0; i < placed.size(); ++i)
        for (const Arc& a : placed[i].arcs()) {
            auto key = std::minmax(a.src, a.dst);
            pam[{key.first, key.second}].push_back({int(i), a});
        }

    Quiver out;
    for (const auto& [v, uses] : cover) out.add_node(v);
    for (const auto& [pair, lst] : pam) {
        if (lst.size() > 2)
            return fail(GlueError::CoverageExceeded,
                        "more than two block arcs between " +
                            std::to_string(pair.first) + " and " +
                            std::to_string(pair.second));
        if (lst.size() == 1) {
            out.add_arc(lst[0].second.src, lst[0].second.dst, 1);
        } else {
            const Arc& a = lst[0].second;
            const Arc& b = lst[1].second;
            if (a.src == b.src) {
                out.add_arc(a.src, a.dst, 2);  // rule 3
            } else {
                Annihilation ann{lst[0].first, a, lst[1].first, b};  // rule 4
                if (ann.block_b < ann.block_a) {
                    std::swap(ann.block_a, ann.block_b);
                    std::swap(ann.arc_a, ann.arc_b);
                }
                res.dec.annihilations.push_back(ann);
            }
        }
    }
    std::sort(res.dec.annihilations.begin(), res.dec.annihilations.end());
    res.dec.placed = placed;
    res.quiver = std::move(out);
    res.ok = true;
    return res;
}

// Builds the full Decomposition (with derived annihilations) for a block
// multiset, or nullopt if the gluing is illegal.
inline std::optional<Decomposition> make_decomposition(
    std::vector<PlacedBlock> placed) {
    std::sort(placed.begin(), placed.end());
    GlueResult g = glue(placed);
    if (!g.ok) return std::nullopt;
    return g.dec;
}

inline bool verify_decomposition(const Quiver& q, const Decomposition& d) {
    GlueResult g = glue(d.placed);
    if (!g.ok) return false;
    if (!(g.quiver == q)) return false;
    auto a = g.dec.annihilations;
    auto b = d.annihilations;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

// ---------------------------------------------------------------------------
// Random generator of decomposable quivers: places n_blocks blocks one at a
// time, gluing each white slot either to a fresh node or to a node that is
// currently covered once at a white slot. Deterministic per seed.

inline std::pair<Quiver, Decomposition> random_decomposable(
    int n_blocks, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return int(rng() % std::uint64_t(n)); };

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<PlacedBlock> placed;
        NodeId next_id = 0;
        bool dead = false;
        for (int i = 0; i < n_blocks && !dead; ++i) {
            const BlockType t = static_cast<BlockType>(pick(6));
            const BlockTemplate& tpl = block_template(t);
            bool ok = false;
            for (int retry = 0; retry < 30 && !ok; ++retry) {
                // nodes covered exactly once, at a white slot
                std::map<NodeId, int> count;
                std::set<NodeId> white_once;
                for (const PlacedBlock& b : placed)
                    for (NodeId v : b.nodes) count[v]++;
                for (const PlacedBlock& b : placed)
                    for (NodeId v : b.nodes)
                        if (count[v] == 1 && b.white_at(v)) white_once.insert(v);

                std::vector<NodeId> sites(white_once.begin(), white_once.end());
                std::vector<NodeId> assign(tpl.slots, -1);
                std::set<NodeId> used;
                NodeId scratch = next_id;
                for (int s = 0; s < tpl.slots; ++s) {
                    bool try_glue = tpl.white[s] && !sites.empty() &&
                                    !placed.empty() && pick(100) < 55;
                    if (try_glue) {
                        NodeId site = sites[pick(int(sites.size()))];
                        if (!used.count(site)) {
                            assign[s] = site;
                            used.insert(site);
                            continue;
                        }
                    }
                    assign[s] = scratch++;
                    used.insert(assign[s]);
                }
                std::vector<PlacedBlock> trial = placed;
                trial.push_back(PlacedBlock::make(t, assign));
                if (glue(trial).ok) {
                    placed = std::move(trial);
                    next_id = scratch;
                    ok = true;
                }
            }
            if (!ok) dead = true;
        }
        if (dead) continue;
        std::sort(placed.begin(), placed.end());
        GlueResult g = glue(placed);
        if (g.ok) return {g.quiver, g.dec};
    }
    // A single spike always glues; unreachable fallback for safety.
    auto b = PlacedBlock::make(BlockType::I, {0, 1});
    GlueResult g = glue({b});
    return {g.quiver, g.dec};
}

}  // namespace qd
