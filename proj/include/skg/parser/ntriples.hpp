#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "skg/litemat/ontology.hpp"
#include "skg/parser/term.hpp"

namespace skg::parser {

// Strict N-Triples: one dot-terminated statement per line, '#' comments,
// absolute IRIs only. Throws ParseError with the offending line number.
std::vector<RawTriple> parse_ntriples(std::string_view text);

// N-Triples writer (used for round-trip checks and export).
std::string to_ntriples(const Term& term);
std::string to_ntriples(const RawTriple& triple);
std::string to_ntriples(const std::vector<RawTriple>& triples);

struct OntologyParse {
    litemat::OntologyGraph graph;
    uint64_t ignored_statements = 0;  // statements that are not rho-df
};

// Reads an ontology file: only subClassOf / subPropertyOf / domain / range
// statements are consumed, everything else is counted and skipped.
OntologyParse parse_ontology(std::string_view text);

}  // namespace skg::parser
