#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace skg::litemat {

// The rho-df statements of an ontology: subClassOf / subPropertyOf edges
// (child first) plus domain and range declarations. Hierarchies become
// forests at encoding time by attaching orphans to the implicit roots.
struct OntologyGraph {
    std::vector<std::pair<std::string, std::string>> concept_edges;
    std::vector<std::pair<std::string, std::string>> property_edges;
    std::map<std::string, std::vector<std::string>> domain_of;  // property -> concepts
    std::map<std::string, std::vector<std::string>> range_of;

    [[nodiscard]] bool empty() const {
        return concept_edges.empty() && property_edges.empty() && domain_of.empty() &&
               range_of.empty();
    }
};

inline constexpr const char* kConceptRoot = "http://www.w3.org/2002/07/owl#Thing";
inline constexpr const char* kPropertyRoot = "http://www.w3.org/2002/07/owl#topObjectProperty";

}  // namespace skg::litemat
