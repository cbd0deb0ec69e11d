#pragma once

// Brute-force BGP matcher and rho-df closure, independent of the engine's
// evaluation path. Rows decode exactly like the engine (IRIs bare, blanks
// with the "_:" marker, literal lexical forms verbatim) so answer sets are
// comparable as sorted string-row multisets.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skg/litemat/ontology.hpp"
#include "skg/parser/sparql.hpp"
#include "skg/parser/term.hpp"

namespace testsupport {

using skg::litemat::OntologyGraph;
using skg::parser::FilterExpr;
using skg::parser::PatternTerm;
using skg::parser::QueryAst;
using skg::parser::RawTriple;
using skg::parser::Term;
using skg::parser::TriplePattern;

using Row = std::vector<std::string>;

inline std::string decode_term(const Term& t) {
    return t.type == skg::parser::TermType::BlankNode ? t.key() : t.value;
}

inline std::optional<double> term_number(const Term& t) {
    if (t.type != skg::parser::TermType::Literal) return std::nullopt;
    std::string_view sv = t.value;
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || sv.empty()) return std::nullopt;
    return v;
}

using Solution = std::map<std::string, Term>;

inline std::optional<bool> oracle_filter(const FilterExpr& f, const Solution& sol) {
    switch (f.node) {
        case FilterExpr::Node::And: {
            const auto a = oracle_filter(*f.lhs, sol);
            const auto b = oracle_filter(*f.rhs, sol);
            if (a == std::optional<bool>(false) || b == std::optional<bool>(false)) return false;
            if (!a || !b) return std::nullopt;
            return *a && *b;
        }
        case FilterExpr::Node::Or: {
            const auto a = oracle_filter(*f.lhs, sol);
            const auto b = oracle_filter(*f.rhs, sol);
            if (a == std::optional<bool>(true) || b == std::optional<bool>(true)) return true;
            if (!a || !b) return std::nullopt;
            return *a || *b;
        }
        case FilterExpr::Node::IdInterval:
            return std::nullopt;  // id-space filters have no lexical meaning here
        case FilterExpr::Node::Compare: break;
    }
    auto it = sol.find(f.var);
    if (it == sol.end()) return std::nullopt;
    const std::optional<double> lhs = term_number(it->second);
    if (!lhs) return std::nullopt;
    double rhs;
    if (f.rhs_is_var) {
        auto rit = sol.find(f.rhs_var);
        if (rit == sol.end()) return std::nullopt;
        const std::optional<double> rv = term_number(rit->second);
        if (!rv) return std::nullopt;
        rhs = *rv;
    } else {
        rhs = f.number;
    }
    switch (f.op) {
        case skg::parser::CompareOp::Lt: return *lhs < rhs;
        case skg::parser::CompareOp::Le: return *lhs <= rhs;
        case skg::parser::CompareOp::Gt: return *lhs > rhs;
        case skg::parser::CompareOp::Ge: return *lhs >= rhs;
        case skg::parser::CompareOp::Eq: return *lhs == rhs;
        case skg::parser::CompareOp::Ne: return *lhs != rhs;
    }
    return std::nullopt;
}

class BgpMatcher {
public:
    // An RDF graph is a set of triples, so the input is deduplicated first.
    explicit BgpMatcher(std::vector<RawTriple> graph) : graph_(std::move(graph)) {
        std::sort(graph_.begin(), graph_.end());
        graph_.erase(std::unique(graph_.begin(), graph_.end()), graph_.end());
        for (std::size_t i = 0; i < graph_.size(); ++i)
            by_predicate_[graph_[i].predicate.value].push_back(i);
    }

    std::vector<Row> solve(const QueryAst& ast) const {
        std::vector<Solution> solutions;
        Solution partial;
        search(ast, 0, partial, solutions);

        std::vector<Row> rows;
        const std::vector<std::string> columns = ast.output_columns();
        for (const Solution& sol : solutions) {
            bool keep = true;
            for (const FilterExpr& f : ast.filters)
                keep = keep && oracle_filter(f, sol).value_or(false);
            if (!keep) continue;
            Row row;
            row.reserve(columns.size());
            for (const std::string& v : columns) {
                auto it = sol.find(v);
                row.push_back(it == sol.end() ? "" : decode_term(it->second));
            }
            rows.push_back(std::move(row));
        }
        if (ast.distinct) {
            std::sort(rows.begin(), rows.end());
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        }
        return rows;
    }

private:
    static bool unify(const PatternTerm& p, const Term& value, Solution& sol) {
        if (!p.is_variable) return p.term == value;
        auto it = sol.find(p.var);
        if (it != sol.end()) return it->second == value;
        sol.emplace(p.var, value);
        return true;
    }

    void search(const QueryAst& ast, std::size_t depth, Solution& partial,
                std::vector<Solution>& out) const {
        if (depth == ast.patterns.size()) {
            out.push_back(partial);
            return;
        }
        const TriplePattern& tp = ast.patterns[depth];
        auto try_triple = [&](const RawTriple& t) {
            Solution extended = partial;
            if (unify(tp.subject, t.subject, extended) &&
                unify(tp.predicate, t.predicate, extended) &&
                unify(tp.object, t.object, extended))
                search(ast, depth + 1, extended, out);
        };
        if (!tp.predicate.is_variable) {
            auto it = by_predicate_.find(tp.predicate.term.value);
            if (it == by_predicate_.end()) return;
            for (std::size_t i : it->second) try_triple(graph_[i]);
        } else {
            auto bound = partial.find(tp.predicate.var);
            if (bound != partial.end()) {
                auto it = by_predicate_.find(bound->second.value);
                if (it == by_predicate_.end()) return;
                for (std::size_t i : it->second) try_triple(graph_[i]);
            } else {
                for (const RawTriple& t : graph_) try_triple(t);
            }
        }
    }

    std::vector<RawTriple> graph_;
    std::map<std::string, std::vector<std::size_t>> by_predicate_;
};

inline std::vector<Row> oracle_solve(const std::vector<RawTriple>& graph, const QueryAst& ast) {
    return BgpMatcher(graph).solve(ast);
}

inline std::vector<Row> sorted_rows(std::vector<Row> rows) {
    std::sort(rows.begin(), rows.end());
    return rows;
}

// Transitive closure of a child->parent edge list, per node.
inline std::map<std::string, std::set<std::string>> ancestor_closure(
    const std::vector<std::pair<std::string, std::string>>& edges) {
    std::map<std::string, std::set<std::string>> direct;
    for (const auto& [child, parent] : edges) direct[child].insert(parent);
    std::map<std::string, std::set<std::string>> closure;
    for (const auto& [node, _] : direct) {
        std::set<std::string>& anc = closure[node];
        std::vector<std::string> stack{node};
        while (!stack.empty()) {
            const std::string cur = stack.back();
            stack.pop_back();
            auto it = direct.find(cur);
            if (it == direct.end()) continue;
            for (const std::string& parent : it->second)
                if (anc.insert(parent).second) stack.push_back(parent);
        }
    }
    return closure;
}

// rho-df saturation: subPropertyOf triple inheritance, domain/range typing
// (through the super-property closure) and subClassOf type inheritance.
inline std::vector<RawTriple> rdfs_closure(const OntologyGraph& ontology,
                                           const std::vector<RawTriple>& triples) {
    const auto prop_anc = ancestor_closure(ontology.property_edges);
    const auto concept_anc = ancestor_closure(ontology.concept_edges);

    std::set<RawTriple> closed(triples.begin(), triples.end());

    // subPropertyOf inheritance
    for (const RawTriple& t : triples) {
        if (t.predicate.value == skg::parser::kRdfType) continue;
        auto it = prop_anc.find(t.predicate.value);
        if (it == prop_anc.end()) continue;
        for (const std::string& super : it->second)
            closed.insert({t.subject, Term::iri(super), t.object});
    }

    // domain/range typing over the inherited predicates
    std::vector<RawTriple> snapshot(closed.begin(), closed.end());
    for (const RawTriple& t : snapshot) {
        if (t.predicate.value == skg::parser::kRdfType) continue;
        if (auto dit = ontology.domain_of.find(t.predicate.value);
            dit != ontology.domain_of.end())
            for (const std::string& c : dit->second)
                closed.insert({t.subject, Term::iri(skg::parser::kRdfType), Term::iri(c)});
        if (t.object.is_resource())
            if (auto rit = ontology.range_of.find(t.predicate.value);
                rit != ontology.range_of.end())
                for (const std::string& c : rit->second)
                    closed.insert({t.object, Term::iri(skg::parser::kRdfType), Term::iri(c)});
    }

    // subClassOf type inheritance
    snapshot.assign(closed.begin(), closed.end());
    for (const RawTriple& t : snapshot) {
        if (t.predicate.value != skg::parser::kRdfType || !t.object.is_resource()) continue;
        auto it = concept_anc.find(t.object.key());
        if (it == concept_anc.end()) continue;
        for (const std::string& super : it->second)
            closed.insert({t.subject, Term::iri(skg::parser::kRdfType), Term::iri(super)});
    }

    return {closed.begin(), closed.end()};
}

}  // namespace testsupport
