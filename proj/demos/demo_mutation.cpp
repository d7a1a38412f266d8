// Worked example: decomposability vs mutation behavior.  Decomposable
// quivers never reach a triple arrow under repeated mutation; quivers that
// do reach one are certainly undecomposable everywhere in their class.

#include <iostream>

#include "qd/oracle.hpp"
#include "qd/quiver.hpp"
#include "qd/reducer.hpp"

using namespace qd;

static void probe(const char* title, const Quiver& q) {
    std::cout << "== " << title << " ==\n" << emit_quiver(q);
    std::cout << (decompose(q).decomposable ? "decomposable" : "undecomposable")
              << "\n";
    ExplorationReport rep = explore_mutation_class(q, 10000);
    switch (rep.status) {
        case ExplorationReport::Status::Finite:
            std::cout << "mutation class: finite, " << rep.class_size
                      << " quivers up to isomorphism\n";
            break;
        case ExplorationReport::Status::Mult3Found:
            std::cout << "mutation class: reaches a triple arrow\n";
            if (rep.witness) std::cout << emit_quiver(*rep.witness);
            break;
        case ExplorationReport::Status::LimitExceeded:
            std::cout << "mutation class: larger than the exploration budget\n";
            break;
    }
    std::cout << "\n";
}

int main() {
    Quiver markov;
    markov.add_arc(0, 1, 2);
    markov.add_arc(1, 2, 2);
    markov.add_arc(2, 0, 2);
    probe("cyclic triple of double arrows", markov);

    Quiver path;
    path.add_arc(0, 1);
    path.add_arc(1, 2);
    probe("directed path on three nodes", path);

    Quiver mixed;
    mixed.add_arc(0, 1, 2);
    mixed.add_arc(1, 2, 2);
    mixed.add_arc(0, 2, 1);
    probe("two double arrows closed by a single arrow", mixed);
    return 0;
}
