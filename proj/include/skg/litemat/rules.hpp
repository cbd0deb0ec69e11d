#pragma once

#include <vector>

#include "skg/litemat/ontology.hpp"
#include "skg/parser/term.hpp"

namespace skg::litemat {

// rdfs:domain / rdfs:range typing cannot be expressed as an id interval, so
// the derived rdf:type triples are materialized into the load. Domain and
// range declarations apply through the super-property closure, matching a
// naive rho-df rule engine. Duplicates are removed; triples already present
// in `triples` are not repeated.
std::vector<parser::RawTriple> materialize_domain_range(
    const OntologyGraph& ontology, const std::vector<parser::RawTriple>& triples);

}  // namespace skg::litemat
