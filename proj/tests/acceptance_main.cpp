// Acceptance sweep.  Each criterion prints exactly one line:
//   criterion N (<name>): pass|FAIL — detail
// The process exits 0 only if every hard criterion passes.  Criterion 9 is
// advisory: it always passes but prints its warnings.  All budgets and
// sample counts are pinned below.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qd/blocks.hpp"
#include "qd/canonical.hpp"
#include "qd/oracle.hpp"
#include "qd/quiver.hpp"
#include "qd/reducer.hpp"

using namespace qd;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned budgets and sample sizes.
constexpr double kBudgetN3Seconds = 10.0;
constexpr double kBudgetN4Seconds = 600.0;
constexpr double kBudgetNamedMillis = 1.0;   // star-9 and glued-squares calls
constexpr int kTimingRepeats = 5;  // each timed call: best of 5, so a
                                   // scheduler preemption cannot fake a miss
constexpr double kBudgetChainSeconds = 1.0;  // 100-triangle chain
constexpr int kSampleN5 = 10000;
constexpr int kRoundTrips = 500;
constexpr int kMutationProbes = 50;
constexpr long kMutationStateBudget = 10000;
constexpr int kRelabelings = 20;
constexpr int kCatalogMaxNodes = 4;  // keeps the advisory sweep quick
constexpr int kExpectedN3Decomposable = 29;
constexpr int kExpectedN4Decomposable = 465;

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::cout << "criterion " << idx << " (" << name << "): "
              << (pass ? "pass" : "FAIL");
    if (!detail.empty()) std::cout << " - " << detail;
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

double secs_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Every quiver on n labeled nodes with arc multiplicities <= 2: one of five
// states per unordered pair.
std::vector<Quiver> all_quivers(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::size_t total = 1;
    for (std::size_t p = 0; p < pairs.size(); ++p) total *= 5;
    std::vector<Quiver> out;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        Quiver q;
        for (int v = 0; v < n; ++v) q.add_node(v);
        for (auto [i, j] : pairs) {
            int s = int(c % 5) - 2;  // -2,-1,0,1,2
            c /= 5;
            if (s > 0)
                q.add_arc(i, j, s);
            else if (s < 0)
                q.add_arc(j, i, -s);
        }
        out.push_back(std::move(q));
    }
    return out;
}

Quiver random_quiver(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(-2, 2);
    Quiver q;
    for (int v = 0; v < n; ++v) q.add_node(v);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int s = d(rng);
            if (s > 0)
                q.add_arc(i, j, s);
            else if (s < 0)
                q.add_arc(j, i, -s);
        }
    return q;
}

Quiver relabel(const Quiver& q, std::mt19937_64& rng) {
    std::vector<NodeId> ids(q.nodes().begin(), q.nodes().end());
    std::vector<NodeId> tgt(ids.size());
    std::iota(tgt.begin(), tgt.end(), 0);
    std::shuffle(tgt.begin(), tgt.end(), rng);
    std::map<NodeId, NodeId> m;
    for (std::size_t i = 0; i < ids.size(); ++i) m[ids[i]] = tgt[i];
    Quiver r;
    for (NodeId v : ids) r.add_node(m[v]);
    for (const Arc& a : q.arcs()) r.add_arc(m[a.src], m[a.dst], a.mult);
    return r;
}

bool verdict(const Quiver& q) { return decompose(q).decomposable; }

Quiver star(int spokes) {
    Quiver q;
    for (int i = 1; i <= spokes; ++i) q.add_arc(0, i);
    return q;
}

Quiver markov() {
    Quiver q;
    q.add_arc(0, 1, 2);
    q.add_arc(1, 2, 2);
    q.add_arc(2, 0, 2);
    return q;
}

Quiver triangle() {
    Quiver q;
    q.add_arc(0, 1);
    q.add_arc(1, 2);
    q.add_arc(2, 0);
    return q;
}

std::vector<PlacedBlock> two_square_blocks() {
    return {PlacedBlock::make(BlockType::V, {0, 1, 2, 3, 4}),
            PlacedBlock::make(BlockType::V, {0, 5, 6, 7, 8})};
}

Quiver triangle_chain(int count) {
    std::vector<PlacedBlock> blocks;
    for (int i = 0; i < count; ++i)
        blocks.push_back(
            PlacedBlock::make(BlockType::II, {2 * i, 2 * i + 1, 2 * i + 2}));
    GlueResult g = glue(blocks);
    return g.quiver;
}

// Instances accumulated for the symmetry checks of criterion 8.
struct Instance {
    Quiver q;
    bool dec;
};
std::vector<Instance> g_instances;

void remember(const Quiver& q, bool dec) { g_instances.push_back({q, dec}); }

}  // namespace

// --------------------------------------------------------------------------

static void criterion1() {
    const auto t0 = Clock::now();
    auto qs = all_quivers(3);
    int agree = 0, ndec = 0;
    bool trace_ok = true;
    for (const Quiver& q : qs) {
        DecomposeResult r = decompose(q);
        OracleResult o = brute_force_decompose(q, {}, false);
        if (r.decomposable == o.decomposable()) ++agree;
        if (r.decomposable) ++ndec;
        if (r.trace.steps.size() > q.node_count()) trace_ok = false;
        remember(q, r.decomposable);
    }
    const double dt = secs_since(t0);
    std::ostringstream d;
    d << qs.size() << " quivers, " << ndec << " decomposable, agreement " << agree
      << "/" << qs.size() << ", " << dt << "s (budget " << kBudgetN3Seconds << "s)";
    report(1, "n=3 exhaustive verdict agreement", //
           agree == int(qs.size()) && ndec == kExpectedN3Decomposable &&
               trace_ok && dt < kBudgetN3Seconds,
           d.str());
}

static void criterion2() {
    const auto t0 = Clock::now();
    auto qs = all_quivers(4);
    int agree = 0, ndec = 0;
    bool trace_ok = true;
    for (const Quiver& q : qs) {
        DecomposeResult r = decompose(q);
        OracleResult o = brute_force_decompose(q, {}, false);
        if (r.decomposable == o.decomposable()) ++agree;
        if (r.decomposable) ++ndec;
        if (r.trace.steps.size() > q.node_count()) trace_ok = false;
        remember(q, r.decomposable);
    }
    const double dt4 = secs_since(t0);

    std::mt19937_64 rng(20240);
    int agree5 = 0;
    for (int i = 0; i < kSampleN5; ++i) {
        Quiver q = random_quiver(5, rng);
        DecomposeResult r = decompose(q);
        OracleResult o = brute_force_decompose(q, {}, false);
        if (r.decomposable == o.decomposable()) ++agree5;
        if (r.trace.steps.size() > q.node_count()) trace_ok = false;
        remember(q, r.decomposable);
    }
    std::ostringstream d;
    d << qs.size() << " quivers at n=4 (" << ndec << " decomposable) in " << dt4
      << "s (budget " << kBudgetN4Seconds << "s), n=5 sample agreement " << agree5
      << "/" << kSampleN5;
    report(2, "n=4 exhaustive + n=5 sampled agreement",
           agree == int(qs.size()) && ndec == kExpectedN4Decomposable &&
               agree5 == kSampleN5 && trace_ok && dt4 < kBudgetN4Seconds,
           d.str());
}

static void criterion3() {
    int ok = 0;
    bool trace_ok = true;
    for (int i = 0; i < kRoundTrips; ++i) {
        const int blocks = 2 + i % 9;  // 2..10
        auto [q, dec] = random_decomposable(blocks, 5000 + std::uint64_t(i));
        DecomposeResult r = decompose(q);
        const bool good = r.decomposable && !r.decompositions.empty() &&
                          verify_decomposition(q, r.decompositions.front());
        if (good) ++ok;
        if (r.trace.steps.size() > q.node_count()) trace_ok = false;
        remember(q, r.decomposable);
    }
    std::ostringstream d;
    d << ok << "/" << kRoundTrips
      << " glued quivers decomposed with a verified decomposition";
    report(3, "random glued quivers round-trip", ok == kRoundTrips && trace_ok,
           d.str());
}

static void criterion4() {
    // Warm one call so the timed runs measure the algorithm, not first-use
    // allocation.
    (void)decompose(triangle());

    Quiver s9 = star(9);
    DecomposeResult rs;
    double ms_star = 1e9;
    for (int i = 0; i < kTimingRepeats; ++i) {
        const auto t0 = Clock::now();
        rs = decompose(s9);
        ms_star = std::min(ms_star, secs_since(t0) * 1000.0);
    }
    const bool star_ok = !rs.decomposable && rs.witness.rule_id == "degree>8";

    GlueResult g = glue(two_square_blocks());
    DecomposeOptions all;
    all.want_all = true;
    DecomposeResult rq;
    double ms_sq = 1e9;
    for (int i = 0; i < kTimingRepeats; ++i) {
        const auto t0 = Clock::now();
        rq = decompose(g.quiver, all);
        ms_sq = std::min(ms_sq, secs_since(t0) * 1000.0);
    }
    std::vector<PlacedBlock> expect = two_square_blocks();
    std::sort(expect.begin(), expect.end());
    bool sq_ok = rq.decomposable && rq.all_enumerated &&
                 rq.decompositions.size() == 1;
    if (sq_ok) {
        std::vector<PlacedBlock> got = rq.decompositions.front().placed;
        std::sort(got.begin(), got.end());
        sq_ok = got == expect;
    }
    remember(s9, false);
    remember(g.quiver, true);
    std::ostringstream d;
    d << "star-9 " << ms_star << "ms, glued squares " << ms_sq << "ms (budget "
      << kBudgetNamedMillis << "ms each)";
    report(4, "star-9 and glued squares", //
           star_ok && sq_ok && ms_star < kBudgetNamedMillis &&
               ms_sq < kBudgetNamedMillis,
           d.str());
}

static void criterion5() {
    DecomposeOptions all;
    all.want_all = true;

    Quiver mk = markov();
    DecomposeResult rm = decompose(mk, all);
    bool markov_ok = rm.decomposable && rm.all_enumerated &&
                     rm.decompositions.size() == 1 &&
                     rm.decompositions.front().placed.size() == 2;
    for (const PlacedBlock& b : rm.decompositions.front().placed)
        markov_ok = markov_ok && b.type == BlockType::II;

    Quiver tri = triangle();
    DecomposeResult rt = decompose(tri, all);
    const bool tri_ok =
        rt.decomposable && rt.all_enumerated && rt.decompositions.size() == 2;

    Quiver one;
    one.add_node(0);
    DecomposeResult r1 = decompose(one);
    Quiver two;
    two.add_node(0);
    two.add_node(1);
    DecomposeResult r2 = decompose(two);

    remember(mk, true);
    remember(tri, true);
    remember(one, false);
    remember(two, true);
    std::ostringstream d;
    d << "markov decs=" << rm.decompositions.size()
      << ", triangle decs=" << rt.decompositions.size() << ", isolated 1/2 -> "
      << (r1.decomposable ? "dec" : "undec") << "/"
      << (r2.decomposable ? "dec" : "undec");
    report(5, "named small instances", //
           markov_ok && tri_ok && !r1.decomposable && r2.decomposable, d.str());
}

static void criterion6() {
    // Trace-length bounds on the bulk instances were already asserted inside
    // criteria 1-3; here the 100-triangle chain exercises a long rewrite run.
    Quiver chain = triangle_chain(100);
    const auto t0 = Clock::now();
    DecomposeResult r = decompose(chain);
    const double dt = secs_since(t0);
    const bool ok = r.decomposable &&
                    r.trace.steps.size() <= chain.node_count() &&
                    dt < kBudgetChainSeconds;
    remember(chain, true);
    std::ostringstream d;
    d << "chain of 100 triangles: " << chain.node_count() << " nodes, "
      << r.trace.steps.size() << " trace steps, " << dt << "s (budget "
      << kBudgetChainSeconds << "s)";
    report(6, "trace stays within the node count", ok, d.str());
}

static void criterion7() {
    int clean = 0;
    for (int i = 0; i < kMutationProbes; ++i) {
        Quiver q;
        std::uint64_t seed = 9100 + std::uint64_t(i) * 37;
        for (;;) {  // decomposable sample with at least 3 nodes
            auto [cand, dec] = random_decomposable(2 + i % 5, seed);
            if (cand.node_count() >= 3) {
                q = std::move(cand);
                break;
            }
            ++seed;
        }
        ExplorationReport rep = explore_mutation_class(q, kMutationStateBudget);
        if (rep.status != ExplorationReport::Status::Mult3Found) ++clean;
    }
    std::ostringstream d;
    d << clean << "/" << kMutationProbes
      << " mutation explorations stayed below multiplicity 3 (budget "
      << kMutationStateBudget << " states each)";
    report(7, "decomposable implies no triple arrow in the mutation class",
           clean == kMutationProbes, d.str());
}

static void criterion8() {
    std::mt19937_64 rng(777);
    long rev_ok = 0, rel_ok = 0;
    const long rel_total = long(g_instances.size()) * kRelabelings;
    for (const Instance& ins : g_instances) {
        if (verdict(ins.q.reversed()) == ins.dec) ++rev_ok;
        for (int t = 0; t < kRelabelings; ++t)
            if (verdict(relabel(ins.q, rng)) == ins.dec) ++rel_ok;
    }
    std::ostringstream d;
    d << "reversal " << rev_ok << "/" << g_instances.size() << ", relabelings "
      << rel_ok << "/" << rel_total;
    report(8, "verdicts invariant under reversal and relabeling",
           rev_ok == long(g_instances.size()) && rel_ok == rel_total, d.str());
}

static void criterion9() {
    std::vector<std::string> warnings;
    auto check = [&](CatalogKind kind, const char* name) {
        Catalog cat = generate_catalog(kind, kCatalogMaxNodes, {});
        std::map<std::string, int> by_key;
        for (const CatalogEntry& e : cat.entries) by_key[e.key] = e.dec_count;
        int unpaired = 0;
        for (const CatalogEntry& e : cat.entries) {
            auto rev = canonical_form(e.representative.reversed(), false);
            auto it = by_key.find(rev.key);
            if (it == by_key.end() || it->second != e.dec_count) ++unpaired;
        }
        if (unpaired)
            warnings.push_back(std::string(name) + ": " + std::to_string(unpaired) +
                               " entries without a reversal partner");
        if (cat.entries.size() != 14)
            warnings.push_back(std::string(name) + ": " +
                               std::to_string(cat.entries.size()) +
                               " entries vs reference count 14");
        return cat.entries.size();
    };
    auto d3 = check(CatalogKind::Degree3, "degree3");
    auto nu = check(CatalogKind::NonUnique, "nonunique");
    std::ostringstream d;
    d << "degree3 entries=" << d3 << ", nonunique entries=" << nu
      << " (max_nodes=" << kCatalogMaxNodes << ")";
    if (warnings.empty())
        d << ", no warnings";
    else
        for (const std::string& w : warnings) d << "; warning: " << w;
    report(9, "catalog reversal symmetry (advisory)", true, d.str());
}

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::cout << (g_failures == 0 ? "acceptance: all criteria passed"
                                  : "acceptance: FAILURES present")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
