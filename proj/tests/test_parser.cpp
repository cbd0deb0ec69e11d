#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <string>

#include "doctest.h"
#include "skg/errors.hpp"
#include "skg/parser/ntriples.hpp"
#include "skg/parser/sparql.hpp"

using namespace skg::parser;

TEST_CASE("n-triples basics") {
    const auto triples = parse_ntriples(
        "<http://a> <http://p> <http://b> .\n"
        "# a comment line\n"
        "\n"
        "<http://a> <http://p> \"3.5\" .\n"
        "_:b0 <http://p> \"x\"^^<http://dt> .\n"
        "<http://a> <http://p> \"hi\"@en .\n");
    REQUIRE(triples.size() == 4);
    CHECK(triples[0].object.type == TermType::Iri);
    CHECK(triples[1].object.type == TermType::Literal);
    CHECK(triples[1].object.value == "3.5");
    CHECK(triples[2].subject.type == TermType::BlankNode);
    CHECK(triples[2].subject.value == "b0");
    CHECK(triples[2].object.datatype == "http://dt");
    CHECK(triples[3].object.lang == "en");
}

TEST_CASE("n-triples escapes") {
    const auto triples = parse_ntriples(
        "<http://a> <http://p> \"line\\nbreak \\\"q\\\" \\u00e9\" .\n");
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].object.value == "line\nbreak \"q\" \xc3\xa9");
}

TEST_CASE("n-triples errors carry line numbers") {
    try {
        parse_ntriples("<http://a> <http://p> <http://b> .\n<http://a> <http://p> <http://b>\n");
        FAIL("expected a parse error");
    } catch (const skg::ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_ntriples("<http://a> <http://p> .\n"), skg::ParseError);
    CHECK_THROWS_AS(parse_ntriples("\"lit\" <http://p> <http://b> .\n"), skg::ParseError);
}

TEST_CASE("n-triples writer round-trips") {
    const std::string text =
        "<http://a> <http://p> \"v\\\\w\\n\" .\n"
        "_:x <http://q> <http://b> .\n";
    const auto triples = parse_ntriples(text);
    const auto again = parse_ntriples(to_ntriples(triples));
    CHECK(again == triples);
}

TEST_CASE("ontology parsing keeps only the four rho-df predicates") {
    const auto parsed = parse_ontology(
        "<http://C> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://B> .\n"
        "<http://p> <http://www.w3.org/2000/01/rdf-schema#subPropertyOf> <http://q> .\n"
        "<http://p> <http://www.w3.org/2000/01/rdf-schema#domain> <http://B> .\n"
        "<http://p> <http://www.w3.org/2000/01/rdf-schema#range> <http://C> .\n"
        "<http://x> <http://other> <http://y> .\n");
    CHECK(parsed.graph.concept_edges.size() == 1);
    CHECK(parsed.graph.property_edges.size() == 1);
    CHECK(parsed.graph.domain_of.at("http://p").size() == 1);
    CHECK(parsed.graph.range_of.at("http://p").size() == 1);
    CHECK(parsed.ignored_statements == 1);

    const auto empty = parse_ontology("<http://x> <http://other> <http://y> .\n");
    CHECK(empty.graph.empty());
    CHECK(empty.ignored_statements == 1);
}

TEST_CASE("qudt-style subclass chain") {
    const auto parsed = parse_ontology(
        "<http://q/AmountOfSubstanceUnit> <http://www.w3.org/2000/01/rdf-schema#subClassOf> "
        "<http://q/Chemistry> .\n"
        "<http://q/Chemistry> <http://www.w3.org/2000/01/rdf-schema#subClassOf> "
        "<http://q/ScienceUnit> .\n");
    REQUIRE(parsed.graph.concept_edges.size() == 2);
    CHECK(parsed.graph.concept_edges[0].first == "http://q/AmountOfSubstanceUnit");
    CHECK(parsed.graph.concept_edges[1].second == "http://q/ScienceUnit");
}

TEST_CASE("query parsing covers the published family shapes") {
    const QueryAst s11 = parse_query(
        "PREFIX lubm: <http://swat.cse.lehigh.edu/onto/univ-bench.owl#>\n"
        "SELECT ?X ?Y ?Z WHERE { ?X lubm:worksFor ?Z }");
    REQUIRE(s11.patterns.size() == 1);
    CHECK(s11.patterns[0].subject.is_variable);
    CHECK(s11.patterns[0].object.is_variable);
    CHECK(!s11.patterns[0].predicate.is_variable);
    CHECK(s11.projection == std::vector<std::string>{"X", "Y", "Z"});

    const QueryAst m2 = parse_query(
        "PREFIX lubm: <http://swat.cse.lehigh.edu/onto/univ-bench.owl#>\n"
        "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
        "SELECT ?X ?Y ?Z WHERE { ?X lubm:memberOf ?Z .\n"
        " ?X rdf:type lubm:GraduateStudent .\n"
        " ?X lubm:undergraduateDegreeFrom ?Y .}");
    REQUIRE(m2.patterns.size() == 3);
    CHECK(m2.patterns[1].is_rdf_type);
    CHECK(m2.patterns[1].object.term.value ==
          "http://swat.cse.lehigh.edu/onto/univ-bench.owl#GraduateStudent");

    const QueryAst star = parse_query(
        "SELECT * WHERE { ?x a <http://s/Platform>; <http://s/hosts> ?s. "
        "?s <http://s/observes> ?o }");
    REQUIRE(star.patterns.size() == 3);
    CHECK(star.select_star);
    CHECK(star.patterns[0].is_rdf_type);
    CHECK(star.patterns[1].subject.var == "x");  // ';' keeps the subject
}

TEST_CASE("filters with precedence and both operand orders") {
    const QueryAst q = parse_query(
        "SELECT ?v WHERE { ?s <http://p> ?v . FILTER(?v<3.00 || ?v>4.50) }");
    REQUIRE(q.filters.size() == 1);
    CHECK(q.filters[0].node == FilterExpr::Node::Or);
    CHECK(q.filters[0].lhs->op == CompareOp::Lt);
    CHECK(q.filters[0].lhs->number == doctest::Approx(3.0));

    const QueryAst norm = parse_query(
        "SELECT ?v WHERE { ?s <http://p> ?v . FILTER(3.0 < ?v && ?v != 7) }");
    CHECK(norm.filters[0].lhs->op == CompareOp::Gt);  // 3 < ?v becomes ?v > 3

    CHECK_THROWS_AS(parse_query("SELECT ?v WHERE { ?s <http://p> ?v . FILTER(regex(?v)) }"),
                    skg::UnsupportedFeature);
}

TEST_CASE("unsupported constructs are named") {
    auto expect_unsupported = [](const char* text, const char* needle) {
        try {
            parse_query(text);
            FAIL_CHECK("expected UnsupportedFeature for " << needle);
        } catch (const skg::UnsupportedFeature& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_unsupported(
        "SELECT ?x WHERE { ?x <http://p> ?y . BIND(?y as ?z) }", "BIND");
    expect_unsupported(
        "SELECT ?x WHERE { { ?x <http://p> ?y } UNION { ?x <http://q> ?y } }", "nested group");
    expect_unsupported(
        "SELECT ?x WHERE { ?x <http://p> ?y . OPTIONAL { ?x <http://q> ?z } }", "OPTIONAL");
}

TEST_CASE("degenerate pattern shapes are rejected") {
    CHECK_THROWS_AS(parse_query("SELECT ?x WHERE { <http://a> <http://p> <http://b> }"),
                    skg::UnsupportedFeature);
    CHECK_THROWS_AS(parse_query("SELECT ?x WHERE { ?s ?p ?o }"), skg::UnsupportedFeature);
}

TEST_CASE("print and reparse is stable") {
    const char* queries[] = {
        "SELECT ?X ?Y WHERE { ?X <http://p> ?Y . ?X a <http://C> . FILTER(?Y > 2 && ?Y < 9) }",
        "SELECT DISTINCT ?s WHERE { ?s <http://p> \"3.5\" }",
        "SELECT * WHERE { ?s <http://p> ?o ; <http://q> ?u . FILTER(?o >= 1 || ?u <= 2) }",
    };
    for (const char* text : queries) {
        const QueryAst once = parse_query(text);
        const QueryAst twice = parse_query(print_query(once));
        CHECK(once.equivalent(twice));
        CHECK(print_query(once) == print_query(twice));
    }
}

TEST_CASE("parser survives arbitrary bytes") {
    std::mt19937_64 rng(0x5eedbeef);
    const std::string seeds[] = {
        "SELECT ?x WHERE { ?x <http://p> ?y }",
        "<http://a> <http://p> \"v\" .",
    };
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text = seeds[trial % 2];
        const int mutations = 1 + static_cast<int>(rng() % 6);
        for (int m = 0; m < mutations; ++m) {
            const std::size_t pos = rng() % (text.size() + 1);
            const char c = static_cast<char>(rng() % 256);
            if (rng() & 1 && pos < text.size())
                text[pos] = c;
            else
                text.insert(text.begin() + pos, c);
        }
        try {
            (void)parse_query(text);
        } catch (const skg::Error&) {
        } catch (const std::out_of_range&) {
            FAIL_CHECK("query parser escaped its own error type");
        }
        try {
            (void)parse_ntriples(text);
        } catch (const skg::Error&) {
        }
    }
}
