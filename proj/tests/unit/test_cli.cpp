// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <thread>

#include "taxowl/cache_store.hpp"
#include "taxowl/http_transport.hpp"
#include "taxowl/owl_merger.hpp"

#include "test_support.hpp"

using test_support::TempDir;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string shell_quote(const std::string& s) {
    std::string quoted = "'";
    for (char c : s) {
        if (c == '\'') quoted += "'\\''";
        else quoted += c;
    }
    quoted += "'";
    return quoted;
}

RunResult run_cli(const std::vector<std::string>& args, const TempDir& scratch) {
    const char* cli = std::getenv("TAXOWL_CLI");
    REQUIRE(cli != nullptr);
    std::string out_path = (scratch.path() / "stdout.txt").string();
    std::string err_path = (scratch.path() / "stderr.txt").string();
    std::string command = shell_quote(cli);
    for (const auto& arg : args) command += " " + shell_quote(arg);
    command += " >" + shell_quote(out_path) + " 2>" + shell_quote(err_path);
    int status = std::system(command.c_str());
    RunResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = test_support::read_file(out_path);
    result.err = test_support::read_file(err_path);
    return result;
}

std::string fixtures(const std::string& corpus) {
    return test_support::fixtures_dir(corpus).string();
}

} // namespace

TEST_CASE("convert writes the OWL document and report, exit 0") {
    TempDir dir("cli");
    std::string out = (dir.path() / "apis.owl").string();
    RunResult r = run_cli({"convert", "--names", "Apis mellifera", "--fixtures",
                           fixtures("animals"), "--out", out},
                          dir);
    CAPTURE(r.err);
    CHECK(r.code == 0);
    std::string owl = test_support::read_file(out);
    CHECK(owl.find("rdf:about=\"https://www.gbif.org/species/1341976\"") != std::string::npos);
    CHECK(owl.find("<rdfs:label xml:lang=\"lat\">Apis mellifera</rdfs:label>") !=
          std::string::npos);
    std::string report = test_support::read_file(out + ".report.csv");
    CHECK(report.rfind("input,normalized,outcome,matchType,confidence,acceptedName,acceptedKey",
                       0) == 0);
    CHECK(report.find("ACCEPTED,EXACT,99") != std::string::npos);
}

TEST_CASE("convert to stdout keeps the document clean of summaries") {
    TempDir dir("cli");
    RunResult r = run_cli(
        {"convert", "--names", "Apis mellifera", "--fixtures", fixtures("animals")}, dir);
    CHECK(r.code == 0);
    CHECK(r.out.rfind("<rdf:RDF", 0) == 0);
    CHECK(r.out.find("processed") == std::string::npos);
    CHECK(r.err.find("processed 1 names") != std::string::npos);
}

TEST_CASE("convert with an empty name is fatal, no output file") {
    TempDir dir("cli");
    std::string out = (dir.path() / "never.owl").string();
    RunResult r = run_cli({"convert", "--names", "", "--fixtures", fixtures("animals"),
                           "--out", out},
                          dir);
    CHECK(r.code == 1);
    CHECK_FALSE(std::filesystem::exists(out));
    CHECK(r.err.find("no input names") != std::string::npos);
}

TEST_CASE("convert reports partial failure with exit 2 but produces output") {
    TempDir dir("cli");
    std::string out = (dir.path() / "partial.owl").string();
    RunResult r = run_cli({"convert", "--names", "Apis mellifera", "--names", "Zzzz qqq",
                           "--fixtures", fixtures("animals"), "--out", out},
                          dir);
    CHECK(r.code == 2);
    CHECK(std::filesystem::exists(out));
    CHECK(r.out.find("FAILED Zzzz qqq") != std::string::npos);
}

TEST_CASE("convert over the names file honours rank hints and comments") {
    TempDir dir("cli");
    std::string out = (dir.path() / "animals.owl").string();
    RunResult r = run_cli({"convert", "--names-file",
                           test_support::data_file("animals.txt").string(), "--fixtures",
                           fixtures("animals"), "--out", out, "--comments"},
                          dir);
    CAPTURE(r.err);
    CHECK(r.code == 0);
    std::string owl = test_support::read_file(out);
    CHECK(owl.find("<!-- Genus Sus -->") != std::string::npos);
    CHECK(owl.find("5 synonym-replaced") == std::string::npos); // summary not in the document
    CHECK(r.out.find("5 synonym-replaced") != std::string::npos);
}

TEST_CASE("two identical convert invocations are byte-identical") {
    TempDir dir("cli");
    std::string out1 = (dir.path() / "run1.owl").string();
    std::string out2 = (dir.path() / "run2.owl").string();
    for (const std::string& out : {out1, out2}) {
        RunResult r = run_cli({"convert", "--names-file",
                               test_support::data_file("animals.txt").string(), "--fixtures",
                               fixtures("animals"), "--out", out},
                              dir);
        REQUIRE(r.code == 0);
    }
    CHECK(test_support::read_file(out1) == test_support::read_file(out2));
    CHECK(test_support::read_file(out1 + ".report.csv") ==
          test_support::read_file(out2 + ".report.csv"));
}

TEST_CASE("all names failing still writes an empty document, exit 2") {
    TempDir dir("cli");
    std::string out = (dir.path() / "empty.owl").string();
    RunResult r = run_cli({"convert", "--names", "Zzzz qqq", "--fixtures", fixtures("animals"),
                           "--out", out},
                          dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("empty graph") != std::string::npos);
    std::string owl = test_support::read_file(out);
    CHECK(owl.find("owl:Class") == std::string::npos);
    CHECK(owl.find("<rdf:RDF") != std::string::npos);
}

TEST_CASE("check prints the status table without producing OWL") {
    TempDir dir("cli");
    RunResult r = run_cli({"check", "--names", "Capra hircus", "--names", "Apis mellifera",
                           "--fixtures", fixtures("animals")},
                          dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("SYNONYM") != std::string::npos);
    CHECK(r.out.find("Capra aegagrus") != std::string::npos);
    CHECK(r.out.find("ACCEPTED") != std::string::npos);
    CHECK(r.out.find("<rdf:RDF") == std::string::npos);
}

TEST_CASE("check flags nonsense names as FAILED/NONE with exit 2") {
    TempDir dir("cli");
    RunResult r = run_cli({"check", "--names", "Zzzz qqq", "--fixtures", fixtures("animals")},
                          dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("FAILED") != std::string::npos);
    CHECK(r.out.find("NONE") != std::string::npos);
}

TEST_CASE("merging one file re-serializes it modulo the ordering rule") {
    TempDir dir("cli");
    std::string apis = (dir.path() / "apis.owl").string();
    RunResult conv = run_cli({"convert", "--names", "Apis mellifera", "--fixtures",
                              fixtures("animals"), "--out", apis},
                             dir);
    REQUIRE(conv.code == 0);
    std::string merged_path = (dir.path() / "merged.owl").string();
    RunResult r = run_cli({"merge", apis, "--out", merged_path}, dir);
    CHECK(r.code == 0);

    using namespace taxowl;
    ParsedFragment original = parse_owl(test_support::read_file(apis), "orig");
    ParsedFragment merged = parse_owl(test_support::read_file(merged_path), "merged");
    REQUIRE(original.classes.size() == merged.classes.size());
    // Same classes; rank-major order in the emitted file happens to agree
    // with key order for this chain.
    for (size_t i = 0; i < original.classes.size(); ++i) {
        CHECK(original.classes[i].iri == merged.classes[i].iri);
        CHECK(original.classes[i].labels == merged.classes[i].labels);
        CHECK(original.classes[i].parents == merged.classes[i].parents);
    }
}

TEST_CASE("merging files with conflicting labels fails naming both") {
    TempDir dir("cli");
    auto write = [&](const char* name, const char* label) {
        std::string path = (dir.path() / name).string();
        std::ofstream out(path);
        out << "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"\n"
               "         xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\"\n"
               "         xmlns:owl=\"http://www.w3.org/2002/07/owl#\">\n"
               "    <owl:Class rdf:about=\"https://www.gbif.org/species/1\">\n"
               "        <rdfs:label xml:lang=\"lat\">"
            << label
            << "</rdfs:label>\n"
               "    </owl:Class>\n"
               "</rdf:RDF>\n";
        return path;
    };
    std::string a = write("a.owl", "Animalia");
    std::string b = write("b.owl", "Animals");
    RunResult r = run_cli({"merge", a, b, "--out", (dir.path() / "m.owl").string()}, dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("a.owl") != std::string::npos);
    CHECK(r.err.find("b.owl") != std::string::npos);
}

TEST_CASE("axioms resolves names and emits the hybrid block") {
    TempDir dir("cli");
    RunResult r = run_cli({"axioms", test_support::data_file("citrus_axioms.txt").string(),
                           "--fixtures", fixtures("hybrids")},
                          dir);
    CAPTURE(r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("<Class IRI=\"https://www.gbif.org/species/8077391\"/>") !=
          std::string::npos);
    CHECK(r.out.find("<ObjectIntersectionOf>") != std::string::npos);
    CHECK(r.out.find("https://www.gbif.org/species/3190164") != std::string::npos);
    CHECK(r.out.find("https://www.gbif.org/species/3190167") != std::string::npos);
}

TEST_CASE("axioms with an unmatched name reports the line number") {
    TempDir dir("cli");
    std::string spec = (dir.path() / "bad.txt").string();
    {
        std::ofstream out(spec);
        out << "# comment\n";
        out << "Citrus \xC3\x97""aurantium | some | is_a_hybrid_of | Nonexistus imaginarius\n";
    }
    RunResult r = run_cli({"axioms", spec, "--fixtures", fixtures("hybrids")}, dir);
    CHECK(r.code == 1);
    CHECK(r.err.find(":2:") != std::string::npos);
    CHECK(r.err.find("UnresolvedTarget") != std::string::npos);
}

TEST_CASE("empty axiom spec emits an empty fragment with exit 0") {
    TempDir dir("cli");
    std::string spec = (dir.path() / "empty.txt").string();
    {
        std::ofstream out(spec);
        out << "# nothing but comments\n";
    }
    RunResult r = run_cli({"axioms", spec, "--fixtures", fixtures("hybrids")}, dir);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("axioms --append-to inserts the fragment before the closing tag") {
    TempDir dir("cli");
    std::string owl_path = (dir.path() / "doc.owl").string();
    RunResult conv = run_cli({"convert", "--names", "Citrus maxima", "--fixtures",
                              fixtures("hybrids"), "--out", owl_path},
                             dir);
    REQUIRE(conv.code == 0);
    RunResult r = run_cli({"axioms", test_support::data_file("citrus_axioms.txt").string(),
                           "--fixtures", fixtures("hybrids"), "--append-to", owl_path},
                          dir);
    CAPTURE(r.err);
    CHECK(r.code == 0);
    std::string owl = test_support::read_file(owl_path);
    auto axiom_pos = owl.find("ObjectSomeValuesFrom");
    auto closing_pos = owl.rfind("</rdf:RDF>");
    REQUIRE(axiom_pos != std::string::npos);
    CHECK(axiom_pos < closing_pos);
}

TEST_CASE("config file values apply and flags override them") {
    TempDir dir("cli");
    std::string cfg = (dir.path() / "taxowl.cfg").string();
    {
        std::ofstream out(cfg);
        out << "# test config\n";
        out << "iri_base = https://api.gbif.org/v1/species/\n";
        out << "lang_tag = la\n";
    }
    RunResult from_cfg = run_cli({"convert", "--config", cfg, "--names", "Apis mellifera",
                                  "--fixtures", fixtures("animals")},
                                 dir);
    CHECK(from_cfg.code == 0);
    CHECK(from_cfg.out.find("https://api.gbif.org/v1/species/1341976") != std::string::npos);
    CHECK(from_cfg.out.find("xml:lang=\"la\"") != std::string::npos);

    RunResult overridden = run_cli({"convert", "--config", cfg, "--names", "Apis mellifera",
                                    "--fixtures", fixtures("animals"), "--iri-base",
                                    "https://www.gbif.org/species/"},
                                   dir);
    CHECK(overridden.code == 0);
    CHECK(overridden.out.find("https://www.gbif.org/species/1341976") != std::string::npos);
    CHECK(overridden.out.find("xml:lang=\"la\"") != std::string::npos);
}

TEST_CASE("unwritable output path is fatal") {
    TempDir dir("cli");
    RunResult r = run_cli({"convert", "--names", "Apis mellifera", "--fixtures",
                           fixtures("animals"), "--out",
                           (dir.path() / "no-such-dir" / "x.owl").string()},
                          dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot write") != std::string::npos);
}

TEST_CASE("GBIF_BASE_URL points the live transport at a test server") {
    httplib::Server server;
    std::atomic<int> calls{0};
    std::string apis = test_support::read_file(
        test_support::fixtures_dir("animals") / "species%2Fmatch%3Fname%3DApis%2520mellifera");
    server.Get("/v1/species/match", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        REQUIRE(req.get_param_value("name") == "Apis mellifera");
        res.set_content(apis, "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    if (port <= 0) {
        SKIP("cannot bind a local port in this environment");
    }
    std::thread serve([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    TempDir dir("cli");
    std::string cache_dir = (dir.path() / "cache").string();
    const char* cli = std::getenv("TAXOWL_CLI");
    REQUIRE(cli != nullptr);
    auto invoke = [&] {
        std::string out_path = (dir.path() / "env-out.txt").string();
        std::string err_path = (dir.path() / "env-err.txt").string();
        std::string command = "GBIF_BASE_URL=" +
                              shell_quote("http://127.0.0.1:" + std::to_string(port) + "/v1/") +
                              " " + shell_quote(cli) +
                              " convert --names 'Apis mellifera' --cache-dir " +
                              shell_quote(cache_dir) + " >" + shell_quote(out_path) + " 2>" +
                              shell_quote(err_path);
        int status = std::system(command.c_str());
        RunResult result;
        result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        result.out = test_support::read_file(out_path);
        result.err = test_support::read_file(err_path);
        return result;
    };

    RunResult first = invoke();
    CAPTURE(first.err);
    CHECK(first.code == 0);
    CHECK(first.out.find("species/1341976") != std::string::npos);
    CHECK(calls == 1);
    CHECK(first.err.find("0 hits, 1 fetches") != std::string::npos);

    // Second run is served from the cache; the server sees no new request.
    RunResult second = invoke();
    CHECK(second.code == 0);
    CHECK(second.out == first.out);
    CHECK(calls == 1);
    CHECK(second.err.find("1 hits, 0 fetches") != std::string::npos);

    server.stop();
    serve.join();
}

TEST_CASE("cache inspect and clear operate on a store directory") {
    TempDir dir("cli");
    std::string cache_dir = (dir.path() / "cache").string();
    {
        taxowl::CacheStore store(cache_dir);
        taxowl::CacheEntry e;
        e.request_key = "species/1";
        e.body = "{}";
        e.fetched_at = std::chrono::system_clock::now();
        store.put(e);
    }
    RunResult inspect = run_cli({"cache", "inspect", "--cache-dir", cache_dir}, dir);
    CHECK(inspect.code == 0);
    CHECK(inspect.out.find("species/1") != std::string::npos);
    CHECK(inspect.out.find("1 entries") != std::string::npos);

    RunResult clear = run_cli({"cache", "clear", "--cache-dir", cache_dir}, dir);
    CHECK(clear.code == 0);

    RunResult after = run_cli({"cache", "inspect", "--cache-dir", cache_dir}, dir);
    CHECK(after.out.find("0 entries") != std::string::npos);
}

TEST_CASE("fixtures and cache-dir are mutually exclusive") {
    TempDir dir("cli");
    RunResult r = run_cli({"convert", "--names", "Apis mellifera", "--fixtures",
                           fixtures("animals"), "--cache-dir", (dir.path() / "c").string()},
                          dir);
    CHECK(r.code != 0);
}
