#pragma once
// Argument parsing for the command-line tool.  Each command registers only
// the flags it supports; anything else is rejected with exit code 2.

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qd/cli.hpp"

namespace qd {

inline CliOutcome run_cli(const std::vector<std::string>& args) {
    CLI::App app{"block decomposability toolkit for quivers"};
    app.require_subcommand(1);

    CommandRequest req;

    auto add_json = [&](CLI::App* c) {
        c->add_flag("--json", req.json, "emit a JSON report");
    };
    auto add_file = [&](CLI::App* c) {
        c->add_option("file", req.inputs, "quiver file (`SRC DST [MULT]` lines)")
            ->required()
            ->expected(1);
    };
    auto add_limit = [&](CLI::App* c, const char* what) {
        c->add_option("--limit", req.limit, what);
    };

    CLI::App* validate = app.add_subcommand("validate", "check a quiver file");
    add_file(validate);
    add_json(validate);

    CLI::App* decompose =
        app.add_subcommand("decompose", "decide block decomposability");
    add_file(decompose);
    add_json(decompose);
    decompose->add_flag("--all", req.all, "enumerate every decomposition");
    decompose->add_flag("--trace", req.trace, "include the replacement trace");
    add_limit(decompose, "state budget for small-component search");

    CLI::App* glue = app.add_subcommand("glue", "assemble a quiver from blocks");
    glue->add_option("file", req.inputs, "glue spec (`block TYPE 0=N 1=N ...` lines)")
        ->required()
        ->expected(1);
    add_json(glue);

    CLI::App* oracle =
        app.add_subcommand("oracle", "exhaustive decomposition search");
    add_file(oracle);
    add_json(oracle);
    oracle->add_flag("--all", req.all, "enumerate every decomposition");
    oracle->add_option("--max-blocks", req.max_blocks, "cap on blocks per decomposition");
    add_limit(oracle, "search state budget");

    CLI::App* mutate = app.add_subcommand("mutate", "mutate at a node");
    add_file(mutate);
    add_json(mutate);
    mutate->add_option("--k", req.k, "node to mutate at")->required();

    CLI::App* mclass =
        app.add_subcommand("mutate-class", "explore the mutation class");
    add_file(mclass);
    add_json(mclass);
    add_limit(mclass, "exploration state budget (default 10000)");

    CLI::App* random =
        app.add_subcommand("random", "sample a random decomposable quiver");
    add_json(random);
    random->add_option("--seed", req.seed, "random seed (default 0)");
    random->add_option("--max-blocks", req.max_blocks, "blocks to place (default 5)");

    CLI::App* catalog =
        app.add_subcommand("gen-catalog", "enumerate decomposable neighborhoods");
    catalog->add_option("kind", req.inputs, "degree3 | degree4 | nonunique")
        ->required()
        ->expected(1);
    add_json(catalog);
    add_limit(catalog, "per-quiver search state budget");

    std::vector<const char*> argv;
    argv.push_back("qd");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        return {0, app.help(), ""};
    } catch (const CLI::CallForAllHelp&) {
        return {0, app.help("", CLI::AppFormatMode::All), ""};
    } catch (const CLI::ParseError& e) {
        return {2, "", std::string("error: ") + e.what() + "\n"};
    }

    req.command = app.get_subcommands().front()->get_name();
    return run_request(req);
}

}  // namespace qd
