// Command-line front end: one subcommand per analysis plus sweep/reproduce/rerun.
#include "ringlight/errors.hpp"
#include "ringlight/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace ringlight;

namespace {

struct CommonArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::string output;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_config) {
    if (with_config) {
        cmd->add_option("-c,--config", args.config, "scenario JSON file");
    }
    cmd->add_option("-s,--set", args.overrides, "override a config value, e.g. --set geometry.ring_size=8")
        ->take_all();
    cmd->add_option("-o,--output", args.output, "output directory");
    cmd->add_option("-j,--jobs", args.jobs, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
}

std::string default_dir(const std::string& name) {
    const char* env = std::getenv("RINGLIGHT_OUTPUT_DIR");
    return (fs::path(env && *env ? env : "runs") / name).string();
}

void report(const RunSummary& s) {
    std::cout << s.directory << " (config " << s.config_hash << ")\n";
    if (s.summary.contains("metrics")) {
        for (const auto& [k, v] : s.summary["metrics"].items()) {
            std::cout << "  " << k << " = " << v.dump() << '\n';
        }
    }
    if (s.summary.contains("best_point")) {
        std::cout << "  best " << s.summary["primary_metric"].get<std::string>() << " = "
                  << s.summary["best_value"].dump() << " at " << s.summary["best_point"].dump() << '\n';
    }
    for (const auto& w : s.summary["warnings"]) {
        std::cerr << "warning: " << w.get<std::string>() << '\n';
    }
}

RunOptions options_from(const CommonArgs& a) {
    RunOptions o;
    o.output_dir = a.output;
    o.jobs = a.jobs;
    o.overrides = a.overrides;
    return o;
}

int run(int argc, char** argv) {
    CLI::App app{"ringlight: excitation transport in quantum emitter ring lattices"};
    app.require_subcommand(1);

    CommonArgs common;
    const char* analyses[] = {"geometry", "coupling", "transport", "bands", "zak", "edges", "steady", "analytics"};
    std::vector<std::pair<CLI::App*, std::string>> analysis_cmds;
    for (const char* name : analyses) {
        auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " analysis");
        add_common(cmd, common, true);
        analysis_cmds.emplace_back(cmd, name);
    }
    auto* sweep = app.add_subcommand("sweep", "run a configuration with its sweep axes and disorder ensemble");
    add_common(sweep, common, true);
    sweep->get_option("--config")->required();

    std::string figure;
    auto* repro = app.add_subcommand("reproduce", "run a bundled figure recipe");
    repro->add_option("figure", figure, "figure id (see `list`)")->required();
    add_common(repro, common, false);

    std::string manifest;
    auto* rerun = app.add_subcommand("rerun", "re-run the configuration recorded in a manifest.json");
    rerun->add_option("manifest", manifest, "path to manifest.json")->required()->check(CLI::ExistingFile);
    add_common(rerun, common, false);

    auto* list = app.add_subcommand("list", "list bundled figure recipes");
    auto* schema = app.add_subcommand("schema", "describe the configuration keys");
    std::string show_id;
    auto* show = app.add_subcommand("show", "print a bundled recipe as JSON");
    show->add_option("figure", show_id)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (list->parsed()) {
        for (const auto& id : recipe_ids()) {
            std::cout << id << "  " << recipe(id)["title"].get<std::string>() << '\n';
        }
        return 0;
    }
    if (schema->parsed()) {
        std::cout << schema_text();
        return 0;
    }
    if (show->parsed()) {
        std::cout << recipe(show_id).dump(2) << '\n';
        return 0;
    }
    if (repro->parsed()) {
        RunOptions o = options_from(common);
        if (o.output_dir.empty()) {
            o.output_dir = default_dir(figure);
        }
        for (const auto& s : reproduce(figure, o)) {
            report(s);
        }
        return 0;
    }
    if (rerun->parsed()) {
        report(rerun_manifest(manifest, options_from(common)));
        return 0;
    }

    json doc = common.config.empty() ? json::object() : load_json_file(common.config);
    for (const auto& [cmd, name] : analysis_cmds) {
        if (cmd->parsed()) {
            if (doc.contains("analysis") && doc["analysis"] != name) {
                std::cerr << "note: running '" << name << "' instead of the configured '"
                          << doc["analysis"].get<std::string>() << "'\n";
            }
            doc["analysis"] = name;
            // single-point subcommands ignore sweep axes; use `sweep` for those
            doc.erase("sweep");
        }
    }
    RunOptions o = options_from(common);
    if (o.output_dir.empty() && !(doc.contains("output") && doc["output"].contains("directory"))) {
        const std::string name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>()
                                                                                 : "scenario";
        o.output_dir = default_dir(name);
    }
    report(run_scenario(doc, o));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
