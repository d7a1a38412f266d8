// Core quiver type: construction rules, degrees, components, reversal,
// exchange matrices, and the text format round-trip.

#include <catch2/catch_amalgamated.hpp>

#include "qd/quiver.hpp"

using namespace qd;

TEST_CASE("arc construction enforces quiver shape") {
    Quiver q;
    REQUIRE(q.add_arc(1, 2));
    REQUIRE_FALSE(q.add_arc(1, 2));      // duplicate pair
    REQUIRE_FALSE(q.add_arc(2, 1));      // would form a 2-cycle
    REQUIRE_FALSE(q.add_arc(3, 3));      // loop
    REQUIRE_FALSE(q.add_arc(4, 5, 0));   // non-positive multiplicity
    REQUIRE(q.add_arc(2, 3, 2));
    REQUIRE(q.node_count() == 3);
    REQUIRE(q.arc_count() == 2);
}

TEST_CASE("degree counts multiplicity") {
    Quiver q;
    q.add_arc(0, 1, 2);
    q.add_arc(1, 2, 2);
    REQUIRE(q.degree(1) == 4);  // two incident double arrows
    REQUIRE(q.out_degree(1) == 2);
    REQUIRE(q.in_degree(1) == 2);
    REQUIRE(q.degree(0) == 2);
    Quiver iso;
    iso.add_node(7);
    REQUIRE(iso.degree(7) == 0);
}

TEST_CASE("validation reports") {
    Quiver empty;
    auto r0 = validate(empty);
    REQUIRE(r0.is_quiver());
    REQUIRE(r0.decomposability.empty());

    Quiver m3;
    m3.add_arc(1, 2, 3);
    auto r1 = validate(m3);
    REQUIRE(r1.is_quiver());
    REQUIRE_FALSE(r1.mult_at_most_2);
    REQUIRE(r1.decomposability.size() == 1);
}

TEST_CASE("components partition the quiver") {
    Quiver q;
    q.add_arc(0, 1);
    q.add_arc(1, 2);
    q.add_arc(2, 0);
    q.add_arc(5, 6);
    q.add_node(9);
    auto comps = q.components();
    REQUIRE(comps.size() == 3);
    REQUIRE(comps[0].node_count() == 3);
    REQUIRE(comps[1].node_count() == 2);
    REQUIRE(comps[2].node_count() == 1);
    std::size_t arcs = 0;
    for (const auto& c : comps) arcs += c.arc_count();
    REQUIRE(arcs == q.arc_count());
}

TEST_CASE("reverse flips every arc and is an involution") {
    Quiver q;
    q.add_arc(1, 2);
    q.add_arc(3, 2, 2);
    Quiver r = q.reversed();
    REQUIRE(r.mult_from(2, 1) == 1);
    REQUIRE(r.mult_from(2, 3) == 2);
    REQUIRE(r.reversed() == q);
}

TEST_CASE("neighborhood extraction") {
    // center 0 with spokes to 1,2; boundary arc 1->2; exterior node 5 on 2
    Quiver q;
    q.add_arc(0, 1);
    q.add_arc(2, 0);
    q.add_arc(1, 2);
    q.add_arc(2, 5);
    Neighborhood nb = neighborhood(q, 0);
    REQUIRE(nb.spokes.size() == 2);
    REQUIRE(nb.boundary_arcs.size() == 1);
    REQUIRE(nb.exterior.count(2) == 1);
    REQUIRE(nb.exterior.at(2).size() == 1);
    REQUIRE(nb.boundary_degree.at(2) == 3);

    Quiver star;
    for (int i = 1; i <= 4; ++i) star.add_arc(0, i);
    Neighborhood s = neighborhood(star, 0);
    REQUIRE(s.spokes.size() == 4);
    REQUIRE(s.boundary_arcs.empty());
    REQUIRE(s.exterior.empty());
}

TEST_CASE("exchange matrix round-trip") {
    Quiver q;
    q.add_arc(1, 2);
    q.add_arc(3, 1, 2);
    ExchangeMatrix m = to_exchange_matrix(q);
    REQUIRE(m.b[0][1] == 1);   // nodes sorted: 1,2,3
    REQUIRE(m.b[1][0] == -1);
    REQUIRE(m.b[2][0] == 2);
    auto back = from_exchange_matrix(m.b, &m.index);
    REQUIRE(back.has_value());
    REQUIRE(*back == q);

    REQUIRE_FALSE(from_exchange_matrix({{0, 1}, {1, 0}}).has_value());
    REQUIRE_FALSE(from_exchange_matrix({{1}}).has_value());
}

TEST_CASE("spike exchange matrix") {
    Quiver q;
    q.add_arc(1, 2);
    ExchangeMatrix m = to_exchange_matrix(q);
    REQUIRE(m.b == std::vector<std::vector<int>>{{0, 1}, {-1, 0}});
}

TEST_CASE("text format round-trip and errors") {
    const std::string text =
        "# demo\n"
        "node 9\n"
        "1 2\n"
        "2 3 2\n"
        "\n";
    ParseResult p = parse_quiver(text);
    REQUIRE(p.ok());
    REQUIRE(p.quiver->node_count() == 4);
    REQUIRE(p.quiver->mult_from(2, 3) == 2);

    ParseResult again = parse_quiver(emit_quiver(*p.quiver));
    REQUIRE(again.ok());
    REQUIRE(*again.quiver == *p.quiver);

    REQUIRE_FALSE(parse_quiver("1 2\n2 1\n").ok());   // 2-cycle
    REQUIRE_FALSE(parse_quiver("1 1\n").ok());        // loop
    REQUIRE_FALSE(parse_quiver("1\n").ok());          // malformed
    REQUIRE_FALSE(parse_quiver("1 2 0\n").ok());      // bad mult
    REQUIRE_FALSE(parse_quiver("node -3\n").ok());
    REQUIRE(parse_quiver("1 2\n2 1\n").line == 2);
}

TEST_CASE("emission is deterministic and sorted") {
    Quiver q;
    q.add_arc(5, 1);
    q.add_arc(0, 3);
    q.add_node(8);
    REQUIRE(emit_quiver(q) == "node 8\n0 3\n5 1\n");
    REQUIRE(emit_quiver(q) == emit_quiver(q));
}
