#include "skg/litemat/rules.hpp"

#include <map>
#include <set>
#include <string>

namespace skg::litemat {

using parser::RawTriple;
using parser::Term;

std::vector<RawTriple> materialize_domain_range(const OntologyGraph& ontology,
                                                const std::vector<RawTriple>& triples) {
    std::map<std::string, std::set<std::string>> supers;
    for (const auto& [child, parent] : ontology.property_edges) supers[child].insert(parent);

    // Super-property closure per predicate, memoized across triples.
    std::map<std::string, std::set<std::string>> closure_cache;
    auto closure = [&](const std::string& p) -> const std::set<std::string>& {
        auto it = closure_cache.find(p);
        if (it != closure_cache.end()) return it->second;
        std::set<std::string> result{p};
        std::vector<std::string> stack{p};
        while (!stack.empty()) {
            const std::string cur = std::move(stack.back());
            stack.pop_back();
            auto sit = supers.find(cur);
            if (sit == supers.end()) continue;
            for (const std::string& parent : sit->second)
                if (result.insert(parent).second) stack.push_back(parent);
        }
        return closure_cache.emplace(p, std::move(result)).first->second;
    };

    std::set<std::pair<Term, std::string>> seen;  // (typed term, concept)
    for (const RawTriple& t : triples)
        if (t.predicate.value == parser::kRdfType && t.object.is_resource())
            seen.emplace(t.subject, t.object.key());

    std::vector<RawTriple> derived;
    auto emit = [&](const Term& subject, const std::string& concept_uri) {
        if (!seen.emplace(subject, concept_uri).second) return;
        derived.push_back({subject, Term::iri(parser::kRdfType), Term::iri(concept_uri)});
    };

    for (const RawTriple& t : triples) {
        if (t.predicate.value == parser::kRdfType) continue;
        for (const std::string& p : closure(t.predicate.value)) {
            if (auto dit = ontology.domain_of.find(p); dit != ontology.domain_of.end())
                for (const std::string& concept_uri : dit->second) emit(t.subject, concept_uri);
            if (t.object.is_resource())
                if (auto rit = ontology.range_of.find(p); rit != ontology.range_of.end())
                    for (const std::string& concept_uri : rit->second) emit(t.object, concept_uri);
        }
    }
    return derived;
}

}  // namespace skg::litemat
