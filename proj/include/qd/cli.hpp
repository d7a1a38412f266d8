#pragma once
// Command-line front end over the library: parses quiver and glue-spec
// files, dispatches the decompose / oracle / mutation / catalog commands,
// and renders reports in a human-readable or JSON form.
//
// Exit codes: 0 success or decomposable, 1 undecomposable (witness in the
// report), 2 input or usage error, 3 search budget exceeded before a
// verdict was reached.
//
// Output contract: stdout is byte-identical across runs for equal inputs
// and flags.  Wall-clock timing therefore goes to stderr.  Where it is
// natural, stdout is itself machine-consumable: `mutate` and `glue` print
// a parseable quiver file (metadata as `#` comments) and `random` prints a
// parseable glue-spec file.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qd/blocks.hpp"
#include "qd/oracle.hpp"
#include "qd/quiver.hpp"
#include "qd/reducer.hpp"

namespace qd {

struct CommandRequest {
    std::string command;
    std::vector<std::string> inputs;  // file paths, or the catalog kind
    bool all = false;
    bool json = false;
    bool trace = false;
    std::uint64_t seed = 0;
    int max_blocks = 0;  // oracle: block bound; random: blocks to place
    long limit = 0;      // search / exploration state budget (0 = default)
    long long k = -1;    // mutate: the node to mutate at
};

struct CliOutcome {
    int code = 0;
    std::string out;
    std::string err;
};

// ---------------------------------------------------------------------------
// Glue-spec text format: one block per line, `#` starts a comment.
//   block TYPE 0=NODE 1=NODE ...
// Every slot index of the template must be assigned exactly once.

struct GlueSpecParse {
    std::vector<PlacedBlock> blocks;
    std::string error;
    int line = 0;
    bool ok() const { return error.empty(); }
};

inline GlueSpecParse parse_gluespec(const std::string& text) {
    GlueSpecParse res;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        res.error = msg;
        res.line = lineno;
        return res;
    };
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word != "block") return fail("expected `block TYPE slot=NODE ...`");
        std::string tname;
        if (!(ls >> tname)) return fail("missing block type");
        std::optional<BlockType> t = block_type_from_name(tname);
        if (!t) return fail("unknown block type `" + tname + "`");
        const BlockTemplate& tpl = block_template(*t);
        std::vector<NodeId> assign(tpl.slots, -1);
        std::vector<bool> set(tpl.slots, false);
        std::string tok;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) return fail("expected slot=NODE, got `" + tok + "`");
            long long slot = -1, node = -1;
            try {
                slot = std::stoll(tok.substr(0, eq));
                node = std::stoll(tok.substr(eq + 1));
            } catch (...) {
                return fail("expected slot=NODE, got `" + tok + "`");
            }
            if (slot < 0 || slot >= tpl.slots)
                return fail("slot " + std::to_string(slot) + " out of range for " + tname);
            if (node < 0) return fail("node ids must be non-negative");
            if (set[slot]) return fail("slot " + std::to_string(slot) + " assigned twice");
            set[slot] = true;
            assign[slot] = NodeId(node);
        }
        for (int s = 0; s < tpl.slots; ++s)
            if (!set[s]) return fail("slot " + std::to_string(s) + " of " + tname + " unassigned");
        res.blocks.push_back(PlacedBlock::make(*t, assign));
    }
    if (res.blocks.empty()) {
        lineno = 0;
        return fail("glue spec contains no blocks");
    }
    return res;
}

// ---------------------------------------------------------------------------
// Rendering helpers

namespace cli_detail {

using Json = nlohmann::ordered_json;

inline std::string fmt_block_compact(const PlacedBlock& b) {
    std::string s = block_type_name(b.type);
    s += "(";
    for (std::size_t i = 0; i < b.nodes.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(b.nodes[i]);
    }
    s += ")";
    return s;
}

inline std::string fmt_block_specline(const PlacedBlock& b) {
    std::string s = "block ";
    s += block_type_name(b.type);
    for (std::size_t i = 0; i < b.nodes.size(); ++i)
        s += " " + std::to_string(i) + "=" + std::to_string(b.nodes[i]);
    return s;
}

inline std::string fmt_arc(const Arc& a) {
    std::string s = std::to_string(a.src) + "->" + std::to_string(a.dst);
    if (a.mult != 1) s += "x" + std::to_string(a.mult);
    return s;
}

inline std::string fmt_annihilation(const Annihilation& an) {
    return "annihilate " + std::to_string(an.block_a) + ":" + fmt_arc(an.arc_a) +
           " " + std::to_string(an.block_b) + ":" + fmt_arc(an.arc_b);
}

inline void print_decomposition(std::ostringstream& out, const Decomposition& d,
                                const std::string& indent) {
    for (const PlacedBlock& b : d.placed)
        out << indent << fmt_block_specline(b) << "\n";
    for (const Annihilation& an : d.annihilations)
        out << indent << fmt_annihilation(an) << "\n";
}

inline Json quiver_json(const Quiver& q) {
    Json j;
    j["nodes"] = Json::array();
    for (NodeId v : q.nodes()) j["nodes"].push_back(v);
    j["arcs"] = Json::array();
    for (const Arc& a : q.arcs())
        j["arcs"].push_back({{"src", a.src}, {"dst", a.dst}, {"mult", a.mult}});
    return j;
}

inline Json block_json(const PlacedBlock& b) {
    Json j;
    j["type"] = block_type_name(b.type);
    j["nodes"] = b.nodes;
    return j;
}

inline Json dec_json(const Decomposition& d) {
    Json j;
    j["blocks"] = Json::array();
    for (const PlacedBlock& b : d.placed) j["blocks"].push_back(block_json(b));
    j["annihilations"] = Json::array();
    for (const Annihilation& an : d.annihilations)
        j["annihilations"].push_back(
            {{"block_a", an.block_a},
             {"arc_a", {{"src", an.arc_a.src}, {"dst", an.arc_a.dst}}},
             {"block_b", an.block_b},
             {"arc_b", {{"src", an.arc_b.src}, {"dst", an.arc_b.dst}}}});
    return j;
}

inline Json step_json(const ReplacementStep& st) {
    Json j;
    j["center"] = st.center;
    j["rule"] = st.rule_id;
    j["removed"] = quiver_json(st.removed);
    j["inserted"] = quiver_json(st.inserted);
    j["pullback"] = Json::array();
    for (const PlacedBlock& b : st.pullback_blocks) j["pullback"].push_back(block_json(b));
    j["required"] = Json::array();
    for (const PlacedBlock& b : st.required_blocks) j["required"].push_back(block_json(b));
    j["coverage_limits"] = Json::array();
    for (const auto& [v, cap] : st.coverage_limits)
        j["coverage_limits"].push_back({{"node", v}, {"max", cap}});
    j["white_required"] = st.white_required;
    return j;
}

inline std::string witness_message(const Quiver& q, const Witness& w) {
    if (w.rule_id == "degree>8" && q.has_node(w.node))
        return "degree " + std::to_string(q.degree(w.node)) + " > 8";
    if (w.rule_id == "mult3") return "arc multiplicity exceeds 2";
    if (w.rule_id == "isolated.k=1")
        return "a single isolated node is not a gluing of blocks";
    return "no block arrangement matches";
}

inline Json witness_json(const Quiver& q, const Witness& w) {
    Json j;
    j["node"] = w.node;
    j["case"] = w.rule_id;
    j["message"] = witness_message(q, w);
    return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct LoadedQuiver {
    std::optional<Quiver> quiver;
    CliOutcome failure;  // valid when quiver is empty
};

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline LoadedQuiver load_quiver(const CommandRequest& req) {
    LoadedQuiver r;
    if (req.inputs.empty()) {
        r.failure = {2, "", "error: missing input file\n"};
        return r;
    }
    const std::string& path = req.inputs.front();
    std::optional<std::string> text = read_file(path);
    if (!text) {
        r.failure = {2, "", "error: cannot read `" + path + "`\n"};
        return r;
    }
    ParseResult pr = parse_quiver(*text);
    if (!pr.ok()) {
        r.failure = {2, "",
                     path + ":" + std::to_string(pr.line) + ": " + pr.error + "\n"};
        return r;
    }
    r.quiver = std::move(pr.quiver);
    return r;
}

// ---------------------------------------------------------------------------
// Command bodies

inline CliOutcome cmd_validate(const CommandRequest& req) {
    LoadedQuiver lq = load_quiver(req);
    if (!lq.quiver) return lq.failure;
    const Quiver& q = *lq.quiver;
    ValidationReport vr = validate(q);
    CliOutcome o;
    o.code = !vr.is_quiver() ? 2 : (vr.decomposability.empty() ? 0 : 1);
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "validate";
        j["valid"] = vr.is_quiver();
        j["problems"] = vr.problems;
        j["flags"] = vr.decomposability;
        j["nodes"] = q.node_count();
        j["arcs"] = q.arc_count();
        j["max_degree"] = vr.max_degree;
        o.out = dump(j);
        return o;
    }
    std::ostringstream out;
    out << "quiver: " << q.node_count() << " nodes, " << q.arc_count()
        << " arcs, max degree " << vr.max_degree << "\n";
    for (const std::string& p : vr.problems) out << "problem: " << p << "\n";
    for (const std::string& f : vr.decomposability) out << "flag: " << f << "\n";
    if (vr.is_quiver() && vr.decomposability.empty()) out << "valid\n";
    o.out = out.str();
    return o;
}

inline CliOutcome cmd_decompose(const CommandRequest& req) {
    LoadedQuiver lq = load_quiver(req);
    if (!lq.quiver) return lq.failure;
    const Quiver& q = *lq.quiver;
    DecomposeOptions opt;
    opt.want_all = req.all;
    if (req.limit > 0) opt.oracle_limits.max_states = req.limit;
    DecomposeResult r = decompose(q, opt);
    CliOutcome o;
    const bool undecided = r.limit_exceeded && !r.decomposable;
    o.code = undecided ? 3 : (r.decomposable ? 0 : 1);
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "decompose";
        j["verdict"] = undecided ? "unknown"
                       : r.decomposable ? "decomposable"
                                        : "undecomposable";
        j["unique"] = r.unique;
        j["all_enumerated"] = r.all_enumerated;
        j["limit_exceeded"] = r.limit_exceeded;
        j["decompositions"] = Json::array();
        for (const Decomposition& d : r.decompositions)
            j["decompositions"].push_back(dec_json(d));
        if (!r.decomposable && !undecided) j["witness"] = witness_json(q, r.witness);
        if (req.trace) {
            j["trace"] = Json::array();
            for (const ReplacementStep& st : r.trace.steps)
                j["trace"].push_back(step_json(st));
        }
        o.out = dump(j);
        return o;
    }
    std::ostringstream out;
    if (undecided) {
        out << "verdict: unknown (search budget exceeded)\n";
    } else if (!r.decomposable) {
        out << "verdict: undecomposable\n";
        out << "witness: node " << r.witness.node << ": "
            << witness_message(q, r.witness) << " [" << r.witness.rule_id << "]\n";
    } else {
        out << "verdict: decomposable\n";
        out << "unique: " << (r.unique ? "yes" : "no") << "\n";
        out << "decompositions: " << r.decompositions.size()
            << (r.all_enumerated ? "" : " (truncated)") << "\n";
        for (std::size_t i = 0; i < r.decompositions.size(); ++i) {
            out << "decomposition " << (i + 1) << ":\n";
            print_decomposition(out, r.decompositions[i], "  ");
        }
    }
    if (req.trace) {
        out << "trace: " << r.trace.steps.size() << " steps\n";
        for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
            const ReplacementStep& st = r.trace.steps[i];
            out << "step " << (i + 1) << ": node " << st.center << " rule "
                << st.rule_id << " removed=" << st.removed.node_count()
                << " nodes inserted=" << st.inserted.node_count()
                << " nodes pullback=[";
            for (std::size_t b = 0; b < st.pullback_blocks.size(); ++b)
                out << (b ? " " : "") << fmt_block_compact(st.pullback_blocks[b]);
            out << "] required=[";
            for (std::size_t b = 0; b < st.required_blocks.size(); ++b)
                out << (b ? " " : "") << fmt_block_compact(st.required_blocks[b]);
            out << "]\n";
        }
    }
    o.out = out.str();
    return o;
}

inline CliOutcome cmd_glue(const CommandRequest& req) {
    if (req.inputs.empty()) return {2, "", "error: missing input file\n"};
    const std::string& path = req.inputs.front();
    std::optional<std::string> text = read_file(path);
    if (!text) return {2, "", "error: cannot read `" + path + "`\n"};
    GlueSpecParse gp = parse_gluespec(*text);
    if (!gp.ok())
        return {2, "", path + ":" + std::to_string(gp.line) + ": " + gp.error + "\n"};
    GlueResult g = glue(gp.blocks);
    if (!g.ok) return {2, "", "glue error: " + g.message + "\n"};
    CliOutcome o;
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "glue";
        j["blocks"] = Json::array();
        for (const PlacedBlock& b : g.dec.placed) j["blocks"].push_back(block_json(b));
        j["quiver"] = quiver_json(g.quiver);
        j["annihilations"] = dec_json(g.dec)["annihilations"];
        o.out = dump(j);
        return o;
    }
    std::ostringstream out;
    out << "# glued " << g.dec.placed.size() << " blocks, "
        << g.dec.annihilations.size() << " annihilations\n";
    for (const Annihilation& an : g.dec.annihilations)
        out << "# " << fmt_annihilation(an) << "\n";
    out << emit_quiver(g.quiver);
    o.out = out.str();
    return o;
}

inline CliOutcome cmd_oracle(const CommandRequest& req) {
    LoadedQuiver lq = load_quiver(req);
    if (!lq.quiver) return lq.failure;
    const Quiver& q = *lq.quiver;
    SearchLimits lim;
    if (req.limit > 0) lim.max_states = req.limit;
    if (req.max_blocks > 0) lim.max_blocks = req.max_blocks;
    OracleResult r = brute_force_decompose(q, lim, req.all);
    CliOutcome o;
    const bool undecided = !r.complete && r.decs.empty();
    o.code = undecided ? 3 : (r.decomposable() ? 0 : 1);
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "oracle";
        j["verdict"] = undecided ? "unknown"
                       : r.decomposable() ? "decomposable"
                                          : "undecomposable";
        j["complete"] = r.complete;
        j["states"] = r.states;
        j["decompositions"] = Json::array();
        for (const Decomposition& d : r.decs)
            j["decompositions"].push_back(dec_json(d));
        o.out = dump(j);
        return o;
    }
    std::ostringstream out;
    if (undecided) {
        out << "verdict: unknown (search budget exceeded)\n";
    } else {
        out << "verdict: " << (r.decomposable() ? "decomposable" : "undecomposable")
            << "\n";
        out << "complete: " << (r.complete ? "yes" : "no") << "\n";
        out << "decompositions: " << r.decs.size() << "\n";
        for (std::size_t i = 0; i < r.decs.size(); ++i) {
            out << "decomposition " << (i + 1) << ":\n";
            print_decomposition(out, r.decs[i], "  ");
        }
    }
    o.out = out.str();
    return o;
}

inline CliOutcome cmd_mutate(const CommandRequest& req) {
    LoadedQuiver lq = load_quiver(req);
    if (!lq.quiver) return lq.failure;
    if (req.k < 0) return {2, "", "error: mutate requires --k NODE\n"};
    std::optional<Quiver> m = mutate(*lq.quiver, NodeId(req.k));
    if (!m)
        return {2, "", "error: node " + std::to_string(req.k) + " not in quiver\n"};
    CliOutcome o;
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "mutate";
        j["node"] = req.k;
        j["quiver"] = quiver_json(*m);
        o.out = dump(j);
        return o;
    }
    o.out = emit_quiver(*m);
    return o;
}

inline CliOutcome cmd_mutate_class(const CommandRequest& req) {
    LoadedQuiver lq = load_quiver(req);
    if (!lq.quiver) return lq.failure;
    const long budget = req.limit > 0 ? req.limit : 10000;
    ExplorationReport rep = explore_mutation_class(*lq.quiver, budget);
    CliOutcome o;
    using St = ExplorationReport::Status;
    o.code = rep.status == St::Finite ? 0 : (rep.status == St::Mult3Found ? 1 : 3);
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "mutate-class";
        j["status"] = rep.status == St::Finite       ? "finite"
                      : rep.status == St::Mult3Found ? "mult3"
                                                     : "limit";
        j["class_size"] = rep.class_size;
        j["explored"] = rep.explored;
        if (rep.witness) j["witness"] = quiver_json(*rep.witness);
        o.out = dump(j);
        return o;
    }
    std::ostringstream out;
    if (rep.status == St::Finite) {
        out << "status: finite\n";
        out << "class size: " << rep.class_size << "\n";
        out << "explored: " << rep.explored << "\n";
    } else if (rep.status == St::Mult3Found) {
        out << "status: multiplicity >= 3 reached (class is infinite)\n";
        if (rep.witness) {
            std::istringstream lines(emit_quiver(*rep.witness));
            std::string l;
            while (std::getline(lines, l)) out << "  " << l << "\n";
        }
    } else {
        out << "status: exploration budget exceeded\n";
    }
    o.out = out.str();
    return o;
}

inline CliOutcome cmd_random(const CommandRequest& req) {
    const int n = req.max_blocks > 0 ? req.max_blocks : 5;
    auto [q, dec] = random_decomposable(n, req.seed);
    CliOutcome o;
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "random";
        j["seed"] = req.seed;
        j["requested_blocks"] = n;
        j["blocks"] = Json::array();
        for (const PlacedBlock& b : dec.placed) j["blocks"].push_back(block_json(b));
        j["annihilations"] = dec_json(dec)["annihilations"];
        j["quiver"] = quiver_json(q);
        o.out = dump(j);
        return o;
    }
    std::ostringstream out;
    for (const PlacedBlock& b : dec.placed) out << fmt_block_specline(b) << "\n";
    for (const Annihilation& an : dec.annihilations)
        out << "# " << fmt_annihilation(an) << "\n";
    out << "# quiver:\n";
    std::istringstream lines(emit_quiver(q));
    std::string l;
    while (std::getline(lines, l)) out << "# " << l << "\n";
    o.out = out.str();
    return o;
}

inline CliOutcome cmd_gen_catalog(const CommandRequest& req) {
    if (req.inputs.empty())
        return {2, "", "error: gen-catalog needs a kind: degree3|degree4|nonunique\n"};
    const std::string& kind = req.inputs.front();
    CatalogKind ck;
    if (kind == "degree3")
        ck = CatalogKind::Degree3;
    else if (kind == "degree4")
        ck = CatalogKind::Degree4;
    else if (kind == "nonunique")
        ck = CatalogKind::NonUnique;
    else
        return {2, "", "error: unknown catalog kind `" + kind + "`\n"};
    SearchLimits lim;
    if (req.limit > 0) lim.max_states = req.limit;
    Catalog cat = generate_catalog(ck, /*max_nodes=*/0, lim);
    CliOutcome o;
    o.code = cat.complete ? 0 : 3;
    if (req.json) {
        Json j;
        j["schema"] = 1;
        j["command"] = "gen-catalog";
        j["kind"] = kind;
        j["max_nodes"] = cat.max_nodes;
        j["complete"] = cat.complete;
        j["entries"] = Json::array();
        for (const CatalogEntry& e : cat.entries) {
            Json je;
            je["key"] = e.key;
            je["dec_count"] = e.dec_count;
            je["decs"] = Json::array();
            for (const Decomposition& d : e.decs) je["decs"].push_back(dec_json(d));
            j["entries"].push_back(std::move(je));
        }
        o.out = dump(j);
        return o;
    }
    o.out = emit_catalog(cat);
    return o;
}

}  // namespace cli_detail

inline CliOutcome run_request(const CommandRequest& req) {
    using namespace cli_detail;
    const auto t0 = std::chrono::steady_clock::now();
    CliOutcome o;
    if (req.command == "validate")
        o = cmd_validate(req);
    else if (req.command == "decompose")
        o = cmd_decompose(req);
    else if (req.command == "glue")
        o = cmd_glue(req);
    else if (req.command == "oracle")
        o = cmd_oracle(req);
    else if (req.command == "mutate")
        o = cmd_mutate(req);
    else if (req.command == "mutate-class")
        o = cmd_mutate_class(req);
    else if (req.command == "random")
        o = cmd_random(req);
    else if (req.command == "gen-catalog")
        o = cmd_gen_catalog(req);
    else
        return {2, "", "error: unknown command `" + req.command + "`\n"};
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    o.err += "elapsed_ms=" + std::to_string(ms) + "\n";
    return o;
}

}  // namespace qd
