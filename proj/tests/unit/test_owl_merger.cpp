// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#include <catch2/catch_amalgamated.hpp>

#include "taxowl/gbif_client.hpp"
#include "taxowl/owl_merger.hpp"
#include "taxowl/taxonomy_builder.hpp"
#include "taxowl/transport.hpp"

#include "test_support.hpp"

using namespace taxowl;

namespace {

GbifClient fixtures_client(const std::string& corpus) {
    return GbifClient(std::make_shared<FixtureTransport>(test_support::fixtures_dir(corpus)),
                      ClientOptions{3, std::chrono::milliseconds(1)});
}

std::string single_name_owl(const char* name) {
    auto client = fixtures_client("animals");
    TaxonomyGraph graph;
    accumulate(resolve_accepted(client.match_name(name), client), graph);
    return emit(graph);
}

std::string fragment_text(const std::string& classes) {
    return "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"\n"
           "         xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\"\n"
           "         xmlns:owl=\"http://www.w3.org/2002/07/owl#\">\n" +
           classes + "</rdf:RDF>\n";
}

} // namespace

TEST_CASE("parsing an emitted document captures every class") {
    std::string owl = single_name_owl("Apis mellifera");
    ParsedFragment fragment = parse_owl(owl, "apis.owl");
    REQUIRE(fragment.classes.size() == 7);
    CHECK(fragment.classes[0].iri == "https://www.gbif.org/species/1");
    CHECK(fragment.classes[0].labels ==
          std::vector<OwlLabel>{OwlLabel{"Animalia", "lat"}});
    CHECK(fragment.classes[0].parents.empty());
    int edges = 0;
    for (const auto& cls : fragment.classes) edges += static_cast<int>(cls.parents.size());
    CHECK(edges == 6);
}

TEST_CASE("an empty rdf:RDF parses to zero classes") {
    ParsedFragment fragment = parse_owl(
        "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\" "
        "xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\" "
        "xmlns:owl=\"http://www.w3.org/2002/07/owl#\"/>");
    CHECK(fragment.classes.empty());
}

TEST_CASE("comments and XML declarations are tolerated") {
    std::string owl = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- banner -->\n" +
                      fragment_text("    <!-- Kingdom Animalia -->\n"
                                    "    <owl:Class rdf:about=\"https://x.org/1\">\n"
                                    "        <rdfs:label xml:lang=\"lat\">A &amp; B</rdfs:label>\n"
                                    "    </owl:Class>\n");
    ParsedFragment fragment = parse_owl(owl);
    REQUIRE(fragment.classes.size() == 1);
    CHECK(fragment.classes[0].labels[0].text == "A & B");
}

TEST_CASE("malformed XML is rejected with a line number") {
    try {
        parse_owl("<rdf:RDF xmlns:rdf=\"x\"\n<oops", "bad.owl");
        FAIL("expected MalformedXml");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedXml);
    }
}

TEST_CASE("elements outside the dialect are reported with location") {
    std::string owl = fragment_text("    <owl:Restriction rdf:about=\"https://x.org/1\"/>\n");
    try {
        parse_owl(owl, "odd.owl");
        FAIL("expected UnknownDialect");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownDialect);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("odd.owl:4"));
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("owl:Restriction"));
    }
}

TEST_CASE("wrong namespace URIs are rejected") {
    std::string owl = "<rdf:RDF xmlns:rdf=\"https://wrong.example\" "
                      "xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\" "
                      "xmlns:owl=\"http://www.w3.org/2002/07/owl#\"/>";
    CHECK_THROWS_AS(parse_owl(owl), Error);
}

TEST_CASE("merge of a fragment with itself equals the fragment") {
    ParsedFragment f = parse_owl(single_name_owl("Apis mellifera"), "apis.owl");
    MergeResult once = merge({f});
    MergeResult twice = merge({f, f});
    CHECK(once.document == twice.document);
    CHECK(serialize_owl(once.document) == serialize_owl(twice.document));
}

TEST_CASE("merging per-species documents dedupes the shared kingdom") {
    ParsedFragment apis = parse_owl(single_name_owl("Apis mellifera"), "apis.owl");
    ParsedFragment pro = parse_owl(single_name_owl("Prochilodus cearensis"), "prochilodus.owl");
    MergeResult merged = merge({apis, pro});

    int animalia = 0;
    for (const auto& cls : merged.document.classes) {
        if (cls.iri == "https://www.gbif.org/species/1") {
            ++animalia;
            CHECK(cls.labels == std::vector<OwlLabel>{OwlLabel{"Animalia", "lat"}});
        }
    }
    CHECK(animalia == 1);
    CHECK(merged.warnings.empty());
    // 7 + 7 classes sharing exactly Animalia -> 13.
    CHECK(merged.document.classes.size() == 13);
}

TEST_CASE("merge is order-insensitive") {
    ParsedFragment apis = parse_owl(single_name_owl("Apis mellifera"), "a");
    ParsedFragment bos = parse_owl(single_name_owl("Bos taurus"), "b");
    ParsedFragment sus = parse_owl(single_name_owl("Sus"), "c");
    CHECK(serialize_owl(merge({apis, bos, sus}).document) ==
          serialize_owl(merge({sus, apis, bos}).document));
}

TEST_CASE("conflicting labels name both sources") {
    ParsedFragment a = parse_owl(
        fragment_text("    <owl:Class rdf:about=\"https://x.org/1\">\n"
                      "        <rdfs:label xml:lang=\"lat\">Animalia</rdfs:label>\n"
                      "    </owl:Class>\n"),
        "first.owl");
    ParsedFragment b = parse_owl(
        fragment_text("    <owl:Class rdf:about=\"https://x.org/1\">\n"
                      "        <rdfs:label xml:lang=\"lat\">Animals</rdfs:label>\n"
                      "    </owl:Class>\n"),
        "second.owl");
    try {
        merge({a, b});
        FAIL("expected LabelConflict");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LabelConflict);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("first.owl"));
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("second.owl"));
    }
}

TEST_CASE("same-label different-language entries coexist") {
    ParsedFragment a = parse_owl(
        fragment_text("    <owl:Class rdf:about=\"https://x.org/1\">\n"
                      "        <rdfs:label xml:lang=\"lat\">Animalia</rdfs:label>\n"
                      "        <rdfs:label xml:lang=\"en\">Animals</rdfs:label>\n"
                      "    </owl:Class>\n"));
    MergeResult merged = merge({a});
    REQUIRE(merged.document.classes.size() == 1);
    CHECK(merged.document.classes[0].labels.size() == 2);
}

TEST_CASE("undeclared parents become placeholder classes with a warning") {
    ParsedFragment orphan = parse_owl(
        fragment_text("    <owl:Class rdf:about=\"https://x.org/54\">\n"
                      "        <rdfs:label xml:lang=\"lat\">Arthropoda</rdfs:label>\n"
                      "        <rdfs:subClassOf rdf:resource=\"https://x.org/1\"/>\n"
                      "    </owl:Class>\n"),
        "orphan.owl");
    MergeResult merged = merge({orphan});
    REQUIRE(merged.document.classes.size() == 2);
    CHECK(merged.document.classes[0].iri == "https://x.org/1");
    CHECK(merged.document.classes[0].labels.empty());
    REQUIRE(merged.warnings.size() == 1);
    CHECK_THAT(merged.warnings[0], Catch::Matchers::ContainsSubstring("https://x.org/1"));
}

TEST_CASE("cyclic subclass edges are rejected") {
    ParsedFragment cycle = parse_owl(
        fragment_text("    <owl:Class rdf:about=\"https://x.org/1\">\n"
                      "        <rdfs:subClassOf rdf:resource=\"https://x.org/2\"/>\n"
                      "    </owl:Class>\n"
                      "    <owl:Class rdf:about=\"https://x.org/2\">\n"
                      "        <rdfs:subClassOf rdf:resource=\"https://x.org/1\"/>\n"
                      "    </owl:Class>\n"));
    try {
        merge({cycle});
        FAIL("expected ParentCycle");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParentCycle);
    }
}

TEST_CASE("merged ordering is by numeric IRI key") {
    ParsedFragment f = parse_owl(
        fragment_text("    <owl:Class rdf:about=\"https://x.org/1341976\"/>\n"
                      "    <owl:Class rdf:about=\"https://x.org/54\"/>\n"
                      "    <owl:Class rdf:about=\"https://x.org/1\"/>\n"));
    MergeResult merged = merge({f});
    REQUIRE(merged.document.classes.size() == 3);
    CHECK(merged.document.classes[0].iri == "https://x.org/1");
    CHECK(merged.document.classes[1].iri == "https://x.org/54");
    CHECK(merged.document.classes[2].iri == "https://x.org/1341976");
}
