// Worked example: assemble quivers from blocks, then recover the block
// structure with the decomposer.

#include <iostream>

#include "qd/blocks.hpp"
#include "qd/quiver.hpp"
#include "qd/reducer.hpp"

using namespace qd;

static void show(const char* title, const Quiver& q) {
    std::cout << "== " << title << " ==\n" << emit_quiver(q);
    DecomposeOptions opt;
    opt.want_all = true;
    DecomposeResult r = decompose(q, opt);
    if (!r.decomposable) {
        std::cout << "undecomposable; witness node " << r.witness.node
                  << " (case " << r.witness.rule_id << ")\n\n";
        return;
    }
    std::cout << "decompositions: " << r.decompositions.size()
              << (r.unique ? " (unique)" : "") << "\n";
    for (const Decomposition& d : r.decompositions) {
        std::cout << " ";
        for (const PlacedBlock& b : d.placed) {
            std::cout << " " << block_type_name(b.type) << "(";
            for (std::size_t i = 0; i < b.nodes.size(); ++i)
                std::cout << (i ? "," : "") << b.nodes[i];
            std::cout << ")";
        }
        std::cout << "\n";
    }
    std::cout << "rewrites used: " << r.trace.steps.size() << "\n\n";
}

int main() {
    // Two 4-point stars sharing their centers.
    GlueResult squares = glue({PlacedBlock::make(BlockType::V, {0, 1, 2, 3, 4}),
                               PlacedBlock::make(BlockType::V, {0, 5, 6, 7, 8})});
    show("two glued 4-point stars", squares.quiver);

    // A chain of ten triangles glued corner to corner.
    std::vector<PlacedBlock> chain;
    for (int i = 0; i < 10; ++i)
        chain.push_back(
            PlacedBlock::make(BlockType::II, {2 * i, 2 * i + 1, 2 * i + 2}));
    show("chain of ten triangles", glue(chain).quiver);

    // An oriented triangle has two distinct block structures.
    Quiver tri;
    tri.add_arc(0, 1);
    tri.add_arc(1, 2);
    tri.add_arc(2, 0);
    show("oriented triangle", tri);

    // A 9-spoke star exceeds the largest degree any block gluing can reach.
    Quiver star;
    for (int i = 1; i <= 9; ++i) star.add_arc(0, i);
    show("9-spoke star", star);
    return 0;
}
