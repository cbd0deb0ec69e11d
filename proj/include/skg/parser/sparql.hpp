#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "skg/parser/term.hpp"

namespace skg::parser {

// One position of a triple pattern: either a variable or a constant term.
struct PatternTerm {
    bool is_variable = false;
    std::string var;  // without the leading '?'
    Term term;

    static PatternTerm variable(std::string name) {
        PatternTerm p;
        p.is_variable = true;
        p.var = std::move(name);
        return p;
    }
    static PatternTerm constant(Term t) {
        PatternTerm p;
        p.term = std::move(t);
        return p;
    }

    bool operator==(const PatternTerm&) const = default;
};

struct TriplePattern {
    PatternTerm subject, predicate, object;
    bool is_rdf_type = false;  // predicate is the rdf:type constant ('a')

    [[nodiscard]] int variable_count() const {
        return (subject.is_variable ? 1 : 0) + (predicate.is_variable ? 1 : 0) +
               (object.is_variable ? 1 : 0);
    }

    bool operator==(const TriplePattern&) const = default;
};

enum class CompareOp : uint8_t { Lt, Le, Gt, Ge, Eq, Ne };

// Boolean filter tree: numeric comparisons combined with && and ||.
// IdInterval leaves are injected by the reasoning rewriter, never parsed.
struct FilterExpr {
    enum class Node : uint8_t { And, Or, Compare, IdInterval };

    Node node = Node::Compare;
    std::unique_ptr<FilterExpr> lhs, rhs;  // And / Or

    // Compare
    std::string var;
    CompareOp op = CompareOp::Lt;
    double number = 0.0;
    std::string rhs_var;
    bool rhs_is_var = false;

    // IdInterval: keeps rows whose raw id satisfies lower <= id < upper
    uint64_t lower = 0;
    uint64_t upper = 0;

    [[nodiscard]] FilterExpr clone() const;
    [[nodiscard]] std::vector<std::string> variables() const;

    bool operator==(const FilterExpr& other) const;

    static FilterExpr compare(std::string v, CompareOp o, double n) {
        FilterExpr e;
        e.node = Node::Compare;
        e.var = std::move(v);
        e.op = o;
        e.number = n;
        return e;
    }
    static FilterExpr interval(std::string v, uint64_t lo, uint64_t hi) {
        FilterExpr e;
        e.node = Node::IdInterval;
        e.var = std::move(v);
        e.lower = lo;
        e.upper = hi;
        return e;
    }
    static FilterExpr combine(Node op, FilterExpr a, FilterExpr b);
};

struct QueryAst {
    bool select_star = false;
    bool distinct = false;
    std::vector<std::string> projection;  // empty when select_star
    std::vector<TriplePattern> patterns;
    std::vector<FilterExpr> filters;
    std::map<std::string, std::string> prefixes;

    // All variables of the BGP in first-appearance order.
    [[nodiscard]] std::vector<std::string> pattern_variables() const;
    // Projected columns: explicit list, or pattern_variables() under '*'.
    [[nodiscard]] std::vector<std::string> output_columns() const;

    [[nodiscard]] bool equivalent(const QueryAst& other) const;
};

// Parses the supported SPARQL subset: PREFIX declarations, SELECT [DISTINCT]
// with '*' or a variable list, a BGP with '.'/';' separators, rdf:type via
// 'a', and FILTER with numeric comparisons joined by && / ||. BIND, UNION,
// OPTIONAL, regex and friends raise UnsupportedFeature naming the construct.
QueryAst parse_query(std::string_view text);

// Canonical text form (absolute IRIs); parse(print(q)) is equivalent to q.
std::string print_query(const QueryAst& ast);

}  // namespace skg::parser
