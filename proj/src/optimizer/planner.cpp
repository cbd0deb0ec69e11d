#include "skg/optimizer/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "skg/errors.hpp"

namespace skg::optimizer {

using litemat::IdInterval;
using parser::PatternTerm;
using parser::QueryAst;
using parser::TriplePattern;

namespace {

enum Position : uint8_t { PosS = 1, PosP = 2, PosO = 4 };

uint8_t positions_of(const TriplePattern& tp, const std::string& var) {
    uint8_t mask = 0;
    if (tp.subject.is_variable && tp.subject.var == var) mask |= PosS;
    if (tp.predicate.is_variable && tp.predicate.var == var) mask |= PosP;
    if (tp.object.is_variable && tp.object.var == var) mask |= PosO;
    return mask;
}

JoinLabel pair_label(uint8_t a, uint8_t b) {
    if ((a & PosS) && (b & PosS)) return JoinLabel::SS;
    if (((a & PosS) && (b & PosO)) || ((a & PosO) && (b & PosS))) return JoinLabel::SO;
    if ((a & PosO) && (b & PosO)) return JoinLabel::OO;
    return JoinLabel::Predicate;
}

std::vector<std::string> tp_variables(const TriplePattern& tp) {
    std::vector<std::string> vars;
    for (const PatternTerm* p : {&tp.subject, &tp.predicate, &tp.object})
        if (p->is_variable && std::find(vars.begin(), vars.end(), p->var) == vars.end())
            vars.push_back(p->var);
    return vars;
}

bool known(const PatternTerm& p, const std::set<std::string>& bound) {
    return !p.is_variable || bound.count(p.var) != 0;
}

// Heuristic-1 shape order, prefix-adjusted: positions already bound by the
// ordered prefix count as constants, and a fully bound pattern is a cheap
// existence check that goes first.
int shape_rank(const TriplePattern& tp, const std::set<std::string>& bound) {
    const bool s = known(tp.subject, bound);
    const bool p = known(tp.predicate, bound);
    const bool o = known(tp.object, bound);
    if (s && p && o) return -1;
    if (tp.is_rdf_type) {
        if (s) return 0;  // (s, rdf:type, ?o)
        if (o) return 1;  // (?s, rdf:type, o)
        return 5;
    }
    if (p) {
        if (s) return 2;  // (s, p, ?o)
        if (o) return 3;  // (?s, p, o)
        return 4;         // (?s, p, ?o)
    }
    return s || o ? 6 : 7;  // variable predicate
}

double estimate(const TriplePattern& tp, const std::set<std::string>& bound,
                const SelectivityStats& stats, bool aggregated) {
    const bool s = known(tp.subject, bound);
    const bool p = known(tp.predicate, bound);
    const bool o = known(tp.object, bound);
    if (s && p && o) return 1.0;
    if (tp.is_rdf_type) {
        if (s)
            return tp.subject.is_variable ? 4.0
                                          : stats.subject_type_count(tp.subject.term.key());
        if (o)
            return tp.object.is_variable ? 4.0
                                         : stats.type_count(tp.object.term.key(), aggregated);
        return stats.total_triples();
    }
    if (p && !tp.predicate.is_variable) {
        const std::string& uri = tp.predicate.term.value;
        const double occ = stats.property_count(uri, aggregated);
        if (s) return std::max(1.0, occ / std::max(1.0, stats.distinct_subjects(uri)));
        if (o) return std::max(1.0, occ / std::max(1.0, stats.distinct_objects(uri)));
        return occ;
    }
    return stats.total_triples();
}

int best_join_rank(const QueryGraph& graph, std::size_t node,
                   const std::vector<bool>& placed) {
    int best = 4;
    for (std::size_t e : graph.adjacency[node]) {
        const QueryGraphEdge& edge = graph.edges[e];
        const std::size_t other = edge.a == node ? edge.b : edge.a;
        if (placed[other]) best = std::min(best, static_cast<int>(edge.label));
    }
    return best;
}

}  // namespace

QueryGraph build_query_graph(const QueryAst& ast) {
    QueryGraph graph;
    graph.ast = &ast;
    const std::size_t n = ast.patterns.size();
    graph.adjacency.assign(n, {});
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            JoinLabel best = JoinLabel::Predicate;
            std::vector<std::string> shared;
            for (const std::string& var : tp_variables(ast.patterns[a])) {
                const uint8_t pb = positions_of(ast.patterns[b], var);
                if (!pb) continue;
                shared.push_back(var);
                best = std::min(best, pair_label(positions_of(ast.patterns[a], var), pb));
            }
            if (shared.empty()) continue;
            graph.adjacency[a].push_back(graph.edges.size());
            graph.adjacency[b].push_back(graph.edges.size());
            graph.edges.push_back({a, b, best, std::move(shared)});
        }
    }

    // Connectivity: a disconnected BGP would force a cartesian product.
    if (n > 1) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t node = stack.back();
            stack.pop_back();
            for (std::size_t e : graph.adjacency[node]) {
                const QueryGraphEdge& edge = graph.edges[e];
                const std::size_t other = edge.a == node ? edge.b : edge.a;
                if (!seen[other]) {
                    seen[other] = true;
                    ++reached;
                    stack.push_back(other);
                }
            }
        }
        if (reached != n)
            throw UnsupportedFeature("disconnected basic graph pattern (cartesian product)");
    }
    return graph;
}

std::size_t get_most_selective(const QueryGraph& graph,
                               const std::vector<std::size_t>& candidates,
                               const std::set<std::string>& bound_vars,
                               const SelectivityStats& stats, double prefix_estimate) {
    std::vector<bool> placed(graph.node_count(), false);
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        // nodes binding a subset of bound_vars are the placed prefix
        bool all_bound = true;
        for (const std::string& v : tp_variables(graph.ast->patterns[i]))
            all_bound = all_bound && bound_vars.count(v);
        placed[i] = all_bound &&
                    std::find(candidates.begin(), candidates.end(), i) == candidates.end();
    }

    std::size_t best = candidates.front();
    auto key = [&](std::size_t node) {
        const TriplePattern& tp = graph.ast->patterns[node];
        const double est =
            std::min(estimate(tp, bound_vars, stats, true), std::max(1.0, prefix_estimate));
        return std::tuple<int, int, double, std::size_t>(
            shape_rank(tp, bound_vars), best_join_rank(graph, node, placed), est, node);
    };
    for (std::size_t node : candidates)
        if (key(node) < key(best)) best = node;
    return best;
}

std::vector<std::size_t> order_tps(const QueryGraph& graph, const SelectivityStats& stats) {
    const QueryAst& ast = *graph.ast;
    const std::size_t n = ast.patterns.size();
    if (n == 0) return {};

    // Seed: most selective rdf:type TP having a subject-subject join. A type
    // lookup with a constant subject is a direct probe and stays seed-worthy
    // whatever its joins; past those, a non-rdf:type TP chosen by the same rank.
    std::vector<std::size_t> seeds;
    for (std::size_t i = 0; i < n; ++i) {
        if (!ast.patterns[i].is_rdf_type) continue;
        for (std::size_t e : graph.adjacency[i])
            if (graph.edges[e].label == JoinLabel::SS) {
                seeds.push_back(i);
                break;
            }
    }
    if (seeds.empty())
        for (std::size_t i = 0; i < n; ++i)
            if (ast.patterns[i].is_rdf_type && !ast.patterns[i].subject.is_variable)
                seeds.push_back(i);
    if (seeds.empty())
        for (std::size_t i = 0; i < n; ++i)
            if (!ast.patterns[i].is_rdf_type) seeds.push_back(i);
    if (seeds.empty())
        for (std::size_t i = 0; i < n; ++i) seeds.push_back(i);

    std::size_t seed = seeds.front();
    auto seed_key = [&](std::size_t node) {
        const TriplePattern& tp = ast.patterns[node];
        return std::tuple<int, double, std::size_t>(shape_rank(tp, {}),
                                                    estimate(tp, {}, stats, true), node);
    };
    for (std::size_t node : seeds)
        if (seed_key(node) < seed_key(seed)) seed = node;

    std::vector<std::size_t> order{seed};
    std::vector<bool> placed(n, false);
    placed[seed] = true;
    std::set<std::string> bound;
    for (const std::string& v : tp_variables(ast.patterns[seed])) bound.insert(v);
    double prefix_estimate = std::max(1.0, estimate(ast.patterns[seed], {}, stats, true));

    while (order.size() < n) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < n; ++i) {
            if (placed[i]) continue;
            for (const std::string& v : tp_variables(ast.patterns[i]))
                if (bound.count(v)) {
                    candidates.push_back(i);
                    break;
                }
        }
        if (candidates.empty())
            throw UnsupportedFeature("disconnected basic graph pattern (cartesian product)");
        const std::size_t next = get_most_selective(graph, candidates, bound, stats,
                                                    prefix_estimate);
        prefix_estimate = std::max(
            1.0, std::min(prefix_estimate, estimate(ast.patterns[next], bound, stats, true)));
        order.push_back(next);
        placed[next] = true;
        for (const std::string& v : tp_variables(ast.patterns[next])) bound.insert(v);
    }
    return order;
}

// --------------------------------------------------------------------------
// Physical plan

AccessMethod choose_access(const TriplePattern& tp, bool s_known, bool p_known, bool o_known) {
    if (tp.is_rdf_type) {
        if (s_known && o_known) return AccessMethod::TypeCheck;
        if (s_known) return AccessMethod::TypeBySubject;
        if (o_known) return AccessMethod::TypeByConcept;
        return AccessMethod::TypeScan;
    }
    if (!p_known) return AccessMethod::PredicateScan;
    if (s_known && o_known) return AccessMethod::Existence;
    if (s_known) return AccessMethod::ObjectsBySP;
    if (o_known) return AccessMethod::SubjectsByPO;
    return AccessMethod::PairsByProperty;
}

namespace {

// Variable whose column comes out ascending when the pattern is evaluated
// standalone (constants only); empty when there is none.
std::string standalone_sorted_var(const TriplePattern& tp) {
    switch (choose_access(tp, !tp.subject.is_variable, !tp.predicate.is_variable,
                          !tp.object.is_variable)) {
        case AccessMethod::TypeByConcept:
        case AccessMethod::SubjectsByPO:
        case AccessMethod::PairsByProperty:
            return tp.subject.var;
        case AccessMethod::TypeBySubject:
        case AccessMethod::TypeScan:
        case AccessMethod::ObjectsBySP:
            return tp.object.var;
        case AccessMethod::PredicateScan:
            return tp.predicate.var;
        case AccessMethod::TypeCheck:
        case AccessMethod::Existence:
            break;
    }
    return {};
}

ResolvedConstant resolve_instance(const store::KnowledgeBase& kb, const parser::Term& term) {
    ResolvedConstant r;
    r.space = ResolvedConstant::Space::Instance;
    auto entry = kb.instances().find(term.key());
    if (entry)
        r.id = entry->id;
    else
        r.missing = true;
    return r;
}

ResolvedConstant resolve_hierarchy(const litemat::Dictionary& dict, const parser::Term& term,
                                   ResolvedConstant::Space space) {
    ResolvedConstant r;
    r.space = space;
    auto entry = dict.find(term.key());
    if (entry) {
        r.id = entry->id;
        r.cover = {{entry->id, entry->id + 1}};
    } else {
        r.missing = true;
    }
    return r;
}

ResolvedConstant resolve_position(const store::KnowledgeBase& kb, const TriplePattern& tp,
                                  const PatternTerm& p, bool is_predicate, bool is_object) {
    if (p.is_variable) return {};
    if (is_predicate) {
        if (tp.is_rdf_type) return {};  // rdf:type itself is not dictionary-encoded
        return resolve_hierarchy(kb.properties(), p.term, ResolvedConstant::Space::Property);
    }
    if (is_object && tp.is_rdf_type)
        return resolve_hierarchy(kb.concepts(), p.term, ResolvedConstant::Space::Concept);
    if (is_object && p.term.is_literal()) {
        ResolvedConstant r;
        r.space = ResolvedConstant::Space::LiteralValue;
        r.literal = p.term;
        return r;
    }
    return resolve_instance(kb, p.term);
}

}  // namespace

JoinPlan make_plan_with_order(const QueryAst& ast, const store::KnowledgeBase& kb,
                              bool reasoning, const std::vector<std::size_t>& order) {
    JoinPlan plan;
    plan.ast = &ast;
    KbStats stats(kb);

    std::set<std::string> bound;
    std::string sorted_var;  // ascending column of the accumulated table
    for (const std::size_t tp_index : order) {
        const TriplePattern& tp = ast.patterns[tp_index];
        PlanStep step;
        step.tp_index = tp_index;
        step.subject = resolve_position(kb, tp, tp.subject, false, false);
        step.predicate = resolve_position(kb, tp, tp.predicate, true, false);
        step.object = resolve_position(kb, tp, tp.object, false, true);
        step.estimate = estimate(tp, bound, stats, reasoning);

        if (plan.steps.empty()) {
            step.join = JoinStrategy::Seed;
            step.access = choose_access(tp, !tp.subject.is_variable, !tp.predicate.is_variable,
                                        !tp.object.is_variable);
            sorted_var = standalone_sorted_var(tp);
        } else {
            std::vector<std::string> shared;
            for (const std::string& v : tp_variables(tp))
                if (bound.count(v)) shared.push_back(v);
            if (shared.empty())
                throw UnsupportedFeature(
                    "disconnected basic graph pattern (cartesian product)");
            const std::string standalone = standalone_sorted_var(tp);
            if (shared.size() == 1 && !sorted_var.empty() && shared.front() == sorted_var &&
                standalone == sorted_var) {
                step.join = JoinStrategy::Merge;
                step.join_variable = sorted_var;
                step.access = choose_access(tp, !tp.subject.is_variable,
                                            !tp.predicate.is_variable, !tp.object.is_variable);
            } else {
                step.join = JoinStrategy::NestedLoop;
                step.access = choose_access(tp, known(tp.subject, bound),
                                            known(tp.predicate, bound),
                                            known(tp.object, bound));
            }
        }
        for (const std::string& v : tp_variables(tp)) bound.insert(v);
        plan.steps.push_back(std::move(step));
    }

    // Filters run right after the step binding their last variable.
    for (std::size_t f = 0; f < ast.filters.size(); ++f) {
        const std::vector<std::string> vars = ast.filters[f].variables();
        std::set<std::string> seen;
        std::size_t target = plan.steps.empty() ? 0 : plan.steps.size() - 1;
        for (std::size_t i = 0; i < plan.steps.size(); ++i) {
            for (const std::string& v : tp_variables(ast.patterns[plan.steps[i].tp_index]))
                seen.insert(v);
            bool all = true;
            for (const std::string& v : vars) all = all && seen.count(v);
            if (all) {
                target = i;
                break;
            }
        }
        if (!plan.steps.empty()) plan.steps[target].filters_after.push_back(f);
    }

    if (reasoning) plan = rewrite_for_reasoning(std::move(plan), kb);
    return plan;
}

JoinPlan make_plan(const QueryAst& ast, const store::KnowledgeBase& kb, bool reasoning) {
    const QueryGraph graph = build_query_graph(ast);
    KbStats stats(kb);
    return make_plan_with_order(ast, kb, reasoning, order_tps(graph, stats));
}

JoinPlan rewrite_for_reasoning(JoinPlan plan, const store::KnowledgeBase& kb) {
    plan.reasoning = true;
    KbStats stats(kb);
    for (PlanStep& step : plan.steps) {
        const TriplePattern& tp = plan.ast->patterns[step.tp_index];
        if (step.object.space == ResolvedConstant::Space::Concept && !step.object.missing) {
            step.object.cover = kb.concepts().subsumption_intervals(step.object.id);
            step.estimate = stats.type_count(tp.object.term.key(), true);
        }
        if (step.predicate.space == ResolvedConstant::Space::Property &&
            !step.predicate.missing) {
            step.predicate.cover = kb.properties().subsumption_intervals(step.predicate.id);
            if (tp.subject.is_variable && tp.object.is_variable)
                step.estimate = stats.property_count(tp.predicate.term.value, true);
        }
    }
    return plan;
}

const char* access_name(AccessMethod m) {
    switch (m) {
        case AccessMethod::TypeCheck: return "type-check";
        case AccessMethod::TypeBySubject: return "type-by-subject";
        case AccessMethod::TypeByConcept: return "type-by-concept";
        case AccessMethod::TypeScan: return "type-scan";
        case AccessMethod::Existence: return "existence-check";
        case AccessMethod::ObjectsBySP: return "objects-by-subject-property";
        case AccessMethod::SubjectsByPO: return "subjects-by-property-object";
        case AccessMethod::PairsByProperty: return "pairs-by-property";
        case AccessMethod::PredicateScan: return "predicate-scan";
    }
    return "?";
}

std::string JoinPlan::explain() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const PlanStep& step = steps[i];
        const TriplePattern& tp = ast->patterns[step.tp_index];
        out << "step " << (i + 1) << ": tp" << (step.tp_index + 1) << " ";
        auto term = [&](const PatternTerm& p) {
            return p.is_variable ? "?" + p.var
                                 : (p.term.is_literal() ? "\"" + p.term.value + "\""
                                                        : "<" + p.term.key() + ">");
        };
        out << term(tp.subject) << " " << (tp.is_rdf_type ? "a" : term(tp.predicate)) << " "
            << term(tp.object);
        out << "  access=" << access_name(step.access);
        out << "  join=";
        switch (step.join) {
            case JoinStrategy::Seed: out << "seed"; break;
            case JoinStrategy::Merge: out << "merge(?" << step.join_variable << ")"; break;
            case JoinStrategy::NestedLoop: out << "nested-loop"; break;
        }
        out << "  est=" << step.estimate;
        if (step.predicate.cover.size() > 1 ||
            (step.predicate.cover.size() == 1 && step.predicate.cover[0].width() > 1))
            out << "  property-intervals=" << step.predicate.cover.size();
        if (step.object.cover.size() > 1 ||
            (step.object.cover.size() == 1 && step.object.cover[0].width() > 1))
            out << "  concept-intervals=" << step.object.cover.size();
        if (!step.filters_after.empty()) out << "  filters=" << step.filters_after.size();
        out << "\n";
    }
    return out.str();
}

// --------------------------------------------------------------------------
// KbStats

double KbStats::type_count(const std::string& concept_uri, bool aggregated) const {
    auto entry = kb_.concepts().find(concept_uri);
    if (!entry) return 0.0;
    return static_cast<double>(aggregated ? kb_.concepts().total_occurrence(entry->id)
                                          : kb_.concepts().occurrence(entry->id));
}

double KbStats::property_count(const std::string& property_uri, bool aggregated) const {
    auto entry = kb_.properties().find(property_uri);
    if (!entry) return 0.0;
    return static_cast<double>(aggregated ? kb_.properties().total_occurrence(entry->id)
                                          : kb_.properties().occurrence(entry->id));
}

double KbStats::distinct_subjects(const std::string& property_uri) const {
    auto entry = kb_.properties().find(property_uri);
    if (!entry) return 0.0;
    double n = 0;
    if (const auto* s = kb_.object_property_stats(entry->id)) n += s->distinct_subjects;
    if (const auto* s = kb_.datatype_property_stats(entry->id)) n += s->distinct_subjects;
    return n;
}

double KbStats::distinct_objects(const std::string& property_uri) const {
    auto entry = kb_.properties().find(property_uri);
    if (!entry) return 0.0;
    double n = 0;
    if (const auto* s = kb_.object_property_stats(entry->id)) n += s->distinct_objects;
    if (const auto* s = kb_.datatype_property_stats(entry->id)) n += s->distinct_objects;
    return n;
}

double KbStats::subject_type_count(const std::string& subject_key) const {
    auto entry = kb_.instances().find(subject_key);
    if (!entry) return 0.0;
    const std::vector<uint64_t>* concepts_list = kb_.type_store().concepts_of(entry->id);
    return concepts_list ? static_cast<double>(concepts_list->size()) : 0.0;
}

double KbStats::total_triples() const { return static_cast<double>(kb_.counts().total()); }

}  // namespace skg::optimizer
