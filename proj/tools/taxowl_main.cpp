// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "taxowl/cli.hpp"
#include "taxowl/strings.hpp"

namespace {

// Optional key=value config file; flags override, GBIF_BASE_URL overrides
// the base URL on top of the file.
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::map<std::string, std::string> values;
    std::ifstream in(path);
    if (!in) {
        throw taxowl::Error(taxowl::ErrorCode::StoreIo, "cannot read config file " + path);
    }
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view = taxowl::trim(line);
        if (view.empty() || view.front() == '#') continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos) continue;
        values[std::string(taxowl::trim(view.substr(0, eq)))] =
            std::string(taxowl::trim(view.substr(eq + 1)));
    }
    return values;
}

void apply_config_file(taxowl::cli::RunConfig& config, const std::string& path) {
    auto values = load_config_file(path);
    auto take = [&](const char* key, auto&& apply) {
        auto it = values.find(key);
        if (it != values.end()) apply(it->second);
    };
    take("base_url", [&](const std::string& v) { config.base_url = v; });
    take("iri_base", [&](const std::string& v) { config.iri_base = v; });
    take("lang_tag", [&](const std::string& v) { config.lang_tag = v; });
    take("cache_dir", [&](const std::string& v) { config.cache_dir = v; });
    take("fixtures", [&](const std::string& v) { config.fixtures_dir = v; });
    take("fuzzy_threshold", [&](const std::string& v) { config.fuzzy_threshold = std::stoi(v); });
    take("allow_fuzzy", [&](const std::string& v) { config.allow_fuzzy = v == "true" || v == "1"; });
    take("parallelism", [&](const std::string& v) { config.parallelism = std::stoi(v); });
    take("comments", [&](const std::string& v) { config.comments = v == "true" || v == "1"; });
}

void add_transport_flags(CLI::App* cmd, taxowl::cli::RunConfig& config) {
    auto* fixtures = cmd->add_option("--fixtures", config.fixtures_dir,
                                     "Replay recorded responses from this directory (offline)");
    auto* cache = cmd->add_option("--cache-dir", config.cache_dir,
                                  "Cache live responses in this directory");
    cmd->add_flag("--refresh", config.refresh, "Bypass cached entries and refetch");
    fixtures->excludes(cache);
}

void add_pipeline_flags(CLI::App* cmd, taxowl::cli::RunConfig& config) {
    static std::string config_path_sink;
    cmd->add_option("--config", config_path_sink,
                    "key=value config file (applied before flags)");
    cmd->add_option("--iri-base", config.iri_base, "Class IRI base")
        ->capture_default_str();
    cmd->add_option("--lang-tag", config.lang_tag, "Label language tag")->capture_default_str();
    cmd->add_option("--fuzzy-threshold", config.fuzzy_threshold,
                    "Confidence needed to accept a FUZZY match")
        ->capture_default_str();
    cmd->add_flag("--allow-fuzzy", config.allow_fuzzy, "Accept FUZZY matches at any confidence");
    cmd->add_option("--parallelism", config.parallelism, "Concurrent name resolutions")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_input_flags(CLI::App* cmd, taxowl::cli::RunConfig& config) {
    cmd->add_option("--names", config.inline_names, "Scientific names to process");
    cmd->add_option("--names-file", config.names_file,
                    "File with one name per line ('#' comments, optional tab-separated rank)");
}

} // namespace

int main(int argc, char** argv) {
    taxowl::cli::RunConfig config;

    // The config file must be applied before CLI11 sees the flags so that
    // flags override file values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(config, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return taxowl::cli::kExitFatal;
            }
        }
    }
    if (const char* base = std::getenv("GBIF_BASE_URL"); base && *base) {
        config.base_url = base;
    }

    CLI::App app{"Converts species name lists into a deduplicated OWL class hierarchy "
                 "using the GBIF backbone taxonomy"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file")
        ->each([](const std::string&) { /* parsed in the pre-pass */ });

    auto* convert = app.add_subcommand("convert", "Resolve names and emit an OWL document");
    add_input_flags(convert, config);
    convert->add_option("--out", config.output_path, "Output OWL file ('-' = stdout)");
    convert->add_option("--report", config.report_path,
                        "Machine-readable CSV report path (default: <out>.report.csv)");
    convert->add_flag("--comments", config.comments, "Emit rank comment banners");
    add_pipeline_flags(convert, config);
    add_transport_flags(convert, config);

    auto* check = app.add_subcommand("check", "Report name status without emitting OWL");
    add_input_flags(check, config);
    check->add_option("--report", config.report_path, "Machine-readable CSV report path");
    add_pipeline_flags(check, config);
    add_transport_flags(check, config);

    auto* merge = app.add_subcommand("merge", "Merge OWL documents, deduplicating classes");
    std::vector<std::string> merge_inputs;
    merge->add_option("inputs", merge_inputs, "OWL documents to merge")->required();
    merge->add_option("--out", config.output_path, "Output OWL file ('-' = stdout)");

    auto* axioms = app.add_subcommand("axioms", "Emit restriction axioms from a spec file");
    std::string axiom_spec;
    std::string append_path;
    axioms->add_option("spec", axiom_spec, "Axiom spec file (subject | kind | property | targets)")
        ->required();
    axioms->add_option("--out", config.output_path, "Output fragment file ('-' = stdout)");
    axioms->add_option("--append-to", append_path, "Insert the fragment into this OWL document");
    add_pipeline_flags(axioms, config);
    add_transport_flags(axioms, config);

    auto* cache = app.add_subcommand("cache", "Inspect or clear a response cache");
    cache->require_subcommand(1);
    std::string cache_dir;
    auto* inspect = cache->add_subcommand("inspect", "List cached requests");
    inspect->add_option("--cache-dir", cache_dir, "Cache directory")->required();
    auto* clear = cache->add_subcommand("clear", "Remove all cached requests");
    clear->add_option("--cache-dir", cache_dir, "Cache directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (convert->parsed()) {
        return taxowl::cli::cmd_convert(config, std::cout, std::cerr);
    }
    if (check->parsed()) {
        return taxowl::cli::cmd_check(config, std::cout, std::cerr);
    }
    if (merge->parsed()) {
        return taxowl::cli::cmd_merge(merge_inputs, config.output_path, std::cout, std::cerr);
    }
    if (axioms->parsed()) {
        return taxowl::cli::cmd_axioms(config, axiom_spec, append_path, std::cout, std::cerr);
    }
    if (cache->parsed()) {
        if (inspect->parsed()) {
            return taxowl::cli::cmd_cache_inspect(cache_dir, std::cout, std::cerr);
        }
        return taxowl::cli::cmd_cache_clear(cache_dir, std::cout, std::cerr);
    }
    return taxowl::cli::kExitFatal;
}
