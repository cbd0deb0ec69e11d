#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skg/litemat/dictionary.hpp"
#include "skg/parser/sparql.hpp"
#include "skg/store/knowledge_base.hpp"

namespace skg::optimizer {

// Join edge labels in preference order: subject-subject joins are the
// cheapest on a PSO layout, predicate-position joins the rarest.
enum class JoinLabel : uint8_t { SS = 0, SO = 1, OO = 2, Predicate = 3 };

struct QueryGraphEdge {
    std::size_t a = 0, b = 0;  // pattern indexes, a < b
    JoinLabel label = JoinLabel::SS;
    std::vector<std::string> variables;
};

// One node per triple pattern; nodes connect when they share a variable.
struct QueryGraph {
    const parser::QueryAst* ast = nullptr;
    std::vector<QueryGraphEdge> edges;
    std::vector<std::vector<std::size_t>> adjacency;  // node -> edge indexes

    [[nodiscard]] std::size_t node_count() const { return ast->patterns.size(); }
};

// Throws UnsupportedFeature when the pattern is disconnected (cartesian product).
QueryGraph build_query_graph(const parser::QueryAst& ast);

// Occurrence statistics feeding the ordering heuristics. Aggregated counts
// fold the hierarchy below a term into its total.
class SelectivityStats {
public:
    virtual ~SelectivityStats() = default;
    virtual double type_count(const std::string& concept_uri, bool aggregated) const = 0;
    virtual double property_count(const std::string& property_uri, bool aggregated) const = 0;
    virtual double distinct_subjects(const std::string& property_uri) const = 0;
    virtual double distinct_objects(const std::string& property_uri) const = 0;
    virtual double subject_type_count(const std::string& subject_key) const = 0;
    virtual double total_triples() const = 0;
};

class KbStats final : public SelectivityStats {
public:
    explicit KbStats(const store::KnowledgeBase& kb) : kb_(kb) {}

    double type_count(const std::string& concept_uri, bool aggregated) const override;
    double property_count(const std::string& property_uri, bool aggregated) const override;
    double distinct_subjects(const std::string& property_uri) const override;
    double distinct_objects(const std::string& property_uri) const override;
    double subject_type_count(const std::string& subject_key) const override;
    double total_triples() const override;

private:
    const store::KnowledgeBase& kb_;
};

// Left-deep TP order: seeded with the most selective rdf:type pattern that
// has a subject-subject join (falling back to a non-rdf:type pattern), then
// repeatedly extended with the most selective pattern connected to the prefix.
std::vector<std::size_t> order_tps(const QueryGraph& graph, const SelectivityStats& stats);

// One extension step, exposed on its own: candidates must share a variable
// with `bound_vars`. `prefix_estimate` is the running cardinality guess used
// to clamp candidate estimates (live counts beat static ones once a prefix
// exists). Ties break on query text order.
std::size_t get_most_selective(const QueryGraph& graph,
                               const std::vector<std::size_t>& candidates,
                               const std::set<std::string>& bound_vars,
                               const SelectivityStats& stats, double prefix_estimate);

enum class AccessMethod : uint8_t {
    TypeCheck,        // rdf:type, subject and concept both known
    TypeBySubject,    // rdf:type, subject known
    TypeByConcept,    // rdf:type, concept known
    TypeScan,         // rdf:type, both free
    Existence,        // s, p, o all known
    ObjectsBySP,      // (s, p, ?o)
    SubjectsByPO,     // (?s, p, o)
    PairsByProperty,  // (?s, p, ?o)
    PredicateScan,    // variable predicate
};

enum class JoinStrategy : uint8_t { Seed, Merge, NestedLoop };

// Physical meaning of a constant after dictionary resolution.
struct ResolvedConstant {
    enum class Space : uint8_t { None, Instance, Concept, Property, LiteralValue };

    Space space = Space::None;
    bool missing = false;  // constant absent from its dictionary -> empty result
    uint64_t id = 0;
    std::vector<litemat::IdInterval> cover;  // concept/property subsumption cover
    parser::Term literal;                    // LiteralValue space
};

struct PlanStep {
    std::size_t tp_index = 0;
    AccessMethod access = AccessMethod::PairsByProperty;
    JoinStrategy join = JoinStrategy::Seed;
    std::string join_variable;  // Merge only
    double estimate = 0.0;
    ResolvedConstant subject, predicate, object;
    std::vector<std::size_t> filters_after;  // indexes into ast->filters
};

struct JoinPlan {
    const parser::QueryAst* ast = nullptr;
    bool reasoning = false;
    std::vector<PlanStep> steps;

    [[nodiscard]] std::string explain() const;
};

// Full planning pipeline: graph, order, constant resolution, join strategy
// and filter placement. `reasoning` additionally routes the plan through
// rewrite_for_reasoning.
JoinPlan make_plan(const parser::QueryAst& ast, const store::KnowledgeBase& kb, bool reasoning);

// Same, but with a caller-chosen TP order (answer sets must not depend on it).
JoinPlan make_plan_with_order(const parser::QueryAst& ast, const store::KnowledgeBase& kb,
                              bool reasoning, const std::vector<std::size_t>& order);

// Widens every hierarchy constant to its subsumption cover and switches the
// step estimates to aggregated totals. Identity when reasoning is off
// (singleton covers stay singleton).
JoinPlan rewrite_for_reasoning(JoinPlan plan, const store::KnowledgeBase& kb);

// Access-path choice given which positions are known (constant or bound).
AccessMethod choose_access(const parser::TriplePattern& tp, bool s_known, bool p_known,
                           bool o_known);

const char* access_name(AccessMethod m);

}  // namespace skg::optimizer
