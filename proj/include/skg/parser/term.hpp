#pragma once

#include <compare>
#include <string>

namespace skg::parser {

enum class TermType : uint8_t { Iri = 0, BlankNode = 1, Literal = 2 };

// One RDF term. For literals `value` is the lexical form and `datatype` /
// `lang` carry the optional suffix; both stay empty otherwise.
struct Term {
    TermType type = TermType::Iri;
    std::string value;
    std::string datatype;
    std::string lang;

    [[nodiscard]] bool is_literal() const { return type == TermType::Literal; }
    [[nodiscard]] bool is_resource() const { return type != TermType::Literal; }

    // Dictionary key / display form: IRIs print bare, blank nodes keep the
    // "_:" marker, literals print their lexical form verbatim.
    [[nodiscard]] std::string key() const {
        return type == TermType::BlankNode ? "_:" + value : value;
    }

    static Term iri(std::string v) { return {TermType::Iri, std::move(v), {}, {}}; }
    static Term blank(std::string label) { return {TermType::BlankNode, std::move(label), {}, {}}; }
    static Term literal(std::string lexical, std::string datatype = {}, std::string lang = {}) {
        return {TermType::Literal, std::move(lexical), std::move(datatype), std::move(lang)};
    }

    auto operator<=>(const Term&) const = default;
};

struct RawTriple {
    Term subject;
    Term predicate;  // always an IRI
    Term object;

    auto operator<=>(const RawTriple&) const = default;
};

inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr const char* kRdfsSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr const char* kRdfsSubPropertyOf = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
inline constexpr const char* kRdfsDomain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr const char* kRdfsRange = "http://www.w3.org/2000/01/rdf-schema#range";

}  // namespace skg::parser
