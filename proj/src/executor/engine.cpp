#include "skg/executor/engine.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <charconv>
#include <set>

#include "skg/errors.hpp"

namespace skg::executor {

using litemat::IdInterval;
using optimizer::AccessMethod;
using optimizer::JoinPlan;
using optimizer::JoinStrategy;
using optimizer::PlanStep;
using optimizer::ResolvedConstant;
using parser::FilterExpr;
using parser::PatternTerm;
using parser::Term;
using parser::TriplePattern;
using store::KnowledgeBase;

std::size_t BindingTable::column_index(const std::string& var) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == var) return i;
    return npos;
}

bool BindingTable::has_column(const std::string& var) const {
    return column_index(var) != npos;
}

bool value_eq(const KnowledgeBase& kb, const Binding& a, const Binding& b) {
    if (a.space != b.space) return false;
    if (a.space == ValueSpace::Literal)
        return a.id == b.id || kb.literal_table(a.id) == kb.literal_table(b.id);
    return a.id == b.id;
}

bool value_less(const KnowledgeBase& kb, const Binding& a, const Binding& b) {
    if (a.space != b.space) return a.space < b.space;
    if (a.space == ValueSpace::Literal && a.id != b.id)
        return kb.literal_table(a.id) < kb.literal_table(b.id);
    return a.id < b.id;
}

namespace {

constexpr uint64_t kNoId = ~uint64_t(0);

std::vector<std::string> pattern_columns(const TriplePattern& tp) {
    std::vector<std::string> cols;
    for (const PatternTerm* p : {&tp.subject, &tp.predicate, &tp.object})
        if (p->is_variable && std::find(cols.begin(), cols.end(), p->var) == cols.end())
            cols.push_back(p->var);
    return cols;
}

// One TP match as (subject, predicate, object) bindings; constant positions
// carry their resolved value so repeated-variable consistency can be checked.
using Match = std::array<Binding, 3>;

struct SlotState {
    bool fixed = false;
    Binding value;
};

// Core pattern matcher against the store. Constant positions come from the
// plan step; bound variables arrive as fixed bindings. Free positions are
// enumerated. Rows are emitted unordered; callers sort as needed.
class PatternMatcher {
public:
    PatternMatcher(const KnowledgeBase& kb, const PlanStep& step, const TriplePattern& tp)
        : kb_(kb), step_(step), tp_(tp) {}

    std::vector<Match> match(const std::optional<Binding>& sb, const std::optional<Binding>& pb,
                             const std::optional<Binding>& ob) const {
        std::vector<Match> out;

        // Subject slot: always the instance space.
        uint64_t s_fixed = kNoId;
        if (!tp_.subject.is_variable) {
            if (step_.subject.missing) return out;
            s_fixed = step_.subject.id;
        } else if (sb) {
            if (sb->space != ValueSpace::Instance) return out;
            s_fixed = sb->id;
        }

        if (tp_.is_rdf_type) {
            match_type(s_fixed, type_object_state(ob),
                       Binding{ValueSpace::Property, kRdfTypePropertyId}, out);
            return out;
        }

        std::vector<IdInterval> cover;
        bool scan_type_store = false;
        if (!tp_.predicate.is_variable) {
            if (step_.predicate.missing) return out;
            cover = step_.predicate.cover;
        } else if (pb) {
            if (pb->space != ValueSpace::Property) return out;
            if (pb->id == kRdfTypePropertyId)
                scan_type_store = true;  // the variable already matched rdf:type
            else
                cover = {{pb->id, pb->id + 1}};
        } else {
            cover = {{0, kNoId}};
            scan_type_store = true;  // a free predicate ranges over rdf:type too
        }

        if (!cover.empty()) match_chains(s_fixed, cover, ob, out);
        if (scan_type_store) {
            const TypeObjectState state = var_predicate_object_state(ob);
            if (!state.impossible)
                match_type(s_fixed, state,
                           Binding{ValueSpace::Property, kRdfTypePropertyId}, out);
        }
        return out;
    }

    // Duplicate matches appear only when a widened constant covers several
    // stored entries; set semantics per pattern keeps joins aligned with
    // matching over the inference closure.
    [[nodiscard]] bool needs_dedup() const {
        if (tp_.is_rdf_type) return false;  // type lookups already deduplicate
        if (tp_.predicate.is_variable) return false;
        const auto& cover = step_.predicate.cover;
        uint64_t width = 0;
        for (const IdInterval& iv : cover) width += iv.width();
        return cover.size() > 1 || width > 1;
    }

private:
    struct TypeObjectState {
        bool impossible = false;
        bool free = false;
        uint64_t echo = 0;  // concept id echoed into the object slot when fixed
        std::vector<IdInterval> cover;
    };

    // Object state of an rdf:type pattern: the plan's constant (with its
    // reasoning cover) or a bound concept value.
    TypeObjectState type_object_state(const std::optional<Binding>& ob) const {
        TypeObjectState state;
        if (!tp_.object.is_variable) {
            state.impossible = step_.object.missing;
            state.cover = step_.object.cover;
            state.echo = step_.object.id;
        } else if (ob) {
            state.impossible = ob->space != ValueSpace::Concept;
            if (!state.impossible) state.cover = {{ob->id, ob->id + 1}};
            state.echo = ob->id;
        } else {
            state.free = true;
        }
        return state;
    }

    // Same, for a predicate variable roaming into the type store: constants
    // resolve against the concept dictionary here, not the instance one.
    TypeObjectState var_predicate_object_state(const std::optional<Binding>& ob) const {
        TypeObjectState state;
        if (!tp_.object.is_variable) {
            if (tp_.object.term.is_literal()) {
                state.impossible = true;
                return state;
            }
            auto entry = kb_.concepts().find(tp_.object.term.key());
            state.impossible = !entry.has_value();
            if (entry) {
                state.cover = {{entry->id, entry->id + 1}};
                state.echo = entry->id;
            }
        } else if (ob) {
            state.impossible = ob->space != ValueSpace::Concept;
            if (!state.impossible) state.cover = {{ob->id, ob->id + 1}};
            state.echo = ob->id;
        } else {
            state.free = true;
        }
        return state;
    }

    void match_type(uint64_t s_fixed, const TypeObjectState& object_state,
                    const Binding& predicate_binding, std::vector<Match>& out) const {
        if (object_state.impossible) return;
        if (s_fixed != kNoId && !object_state.free) {
            if (kb_.subject_typed_in(s_fixed, object_state.cover))
                out.push_back({Binding{ValueSpace::Instance, s_fixed}, predicate_binding,
                               Binding{ValueSpace::Concept, object_state.echo}});
            return;
        }
        if (s_fixed != kNoId) {
            for (uint64_t c : kb_.types_of(s_fixed))
                out.push_back({Binding{ValueSpace::Instance, s_fixed}, predicate_binding,
                               Binding{ValueSpace::Concept, c}});
            return;
        }
        if (!object_state.free) {
            for (uint64_t s : kb_.typed_subjects(object_state.cover))
                out.push_back({Binding{ValueSpace::Instance, s}, predicate_binding,
                               Binding{ValueSpace::Concept, object_state.echo}});
            return;
        }
        for (const auto& [concept_id, subjects] : kb_.type_store().by_concept())
            for (uint64_t s : subjects)
                out.push_back({Binding{ValueSpace::Instance, s}, predicate_binding,
                               Binding{ValueSpace::Concept, concept_id}});
    }

    void match_chains(uint64_t s_fixed, const std::vector<IdInterval>& cover,
                      const std::optional<Binding>& ob, std::vector<Match>& out) const {
        // Object slot meaning: instance id, literal value, or free (both kinds).
        bool o_instance_fixed = false, o_literal_fixed = false;
        uint64_t o_id = kNoId;
        const Term* o_value = nullptr;
        if (!tp_.object.is_variable) {
            if (step_.object.space == ResolvedConstant::Space::LiteralValue) {
                o_literal_fixed = true;
                o_value = &step_.object.literal;
            } else {
                if (step_.object.missing) return;
                o_instance_fixed = true;
                o_id = step_.object.id;
            }
        } else if (ob) {
            if (ob->space == ValueSpace::Instance) {
                o_instance_fixed = true;
                o_id = ob->id;
            } else if (ob->space == ValueSpace::Literal) {
                o_literal_fixed = true;
                o_value = &kb_.literal_table(ob->id);
            } else {
                return;  // concepts/properties never sit in a chain object slot
            }
        }

        for (const IdInterval& iv : cover) {
            if (!o_literal_fixed) object_chain(s_fixed, iv, o_instance_fixed, o_id, out);
            if (!o_instance_fixed) datatype_chain(s_fixed, iv, o_literal_fixed, o_value, out);
        }
    }

    void object_chain(uint64_t s_fixed, const IdInterval& iv, bool o_fixed, uint64_t o_id,
                      std::vector<Match>& out) const {
        const store::ChainIndex& chain = kb_.object_store().chain;
        for (uint64_t pos = chain.lower_bound_block(iv.lower); pos < chain.property_count();
             ++pos) {
            const uint64_t p = chain.property_at(pos);
            if (p >= iv.upper) break;
            const Binding pb{ValueSpace::Property, p};
            const auto [s_begin, s_end] = chain.subject_range(pos);
            if (s_fixed != kNoId) {
                for (uint64_t entry : chain.find_subject(s_begin, s_end, s_fixed)) {
                    const auto [o_begin, o_end] = chain.object_range(entry);
                    if (o_fixed) {
                        if (!kb_.object_store().objects.range_search(o_begin, o_end, o_id)
                                 .empty())
                            out.push_back({Binding{ValueSpace::Instance, s_fixed}, pb,
                                           Binding{ValueSpace::Instance, o_id}});
                    } else {
                        for (uint64_t i = o_begin; i < o_end; ++i)
                            out.push_back(
                                {Binding{ValueSpace::Instance, s_fixed}, pb,
                                 Binding{ValueSpace::Instance,
                                         kb_.object_store().objects.access(i)}});
                    }
                }
            } else if (o_fixed) {
                const auto [o_begin, o_end] = chain.block_object_range(s_begin, s_end);
                for (uint64_t slot :
                     kb_.object_store().objects.range_search(o_begin, o_end, o_id))
                    out.push_back(
                        {Binding{ValueSpace::Instance, chain.subject_at(chain.entry_of_slot(slot))},
                         pb, Binding{ValueSpace::Instance, o_id}});
            } else {
                for (uint64_t entry = s_begin; entry < s_end; ++entry) {
                    const uint64_t s = chain.subject_at(entry);
                    const auto [o_begin, o_end] = chain.object_range(entry);
                    for (uint64_t i = o_begin; i < o_end; ++i)
                        out.push_back({Binding{ValueSpace::Instance, s}, pb,
                                       Binding{ValueSpace::Instance,
                                               kb_.object_store().objects.access(i)}});
                }
            }
        }
    }

    void datatype_chain(uint64_t s_fixed, const IdInterval& iv, bool o_fixed,
                        const Term* o_value, std::vector<Match>& out) const {
        const store::ChainIndex& chain = kb_.datatype_store().chain;
        for (uint64_t pos = chain.lower_bound_block(iv.lower); pos < chain.property_count();
             ++pos) {
            const uint64_t p = chain.property_at(pos);
            if (p >= iv.upper) break;
            const Binding pb{ValueSpace::Property, p};
            const auto [s_begin, s_end] = chain.subject_range(pos);
            auto emit_entry = [&](uint64_t entry) {
                const uint64_t s = chain.subject_at(entry);
                const auto [o_begin, o_end] = chain.object_range(entry);
                for (uint64_t slot = o_begin; slot < o_end; ++slot) {
                    if (o_fixed && !(kb_.literal_table(slot) == *o_value)) continue;
                    out.push_back({Binding{ValueSpace::Instance, s}, pb,
                                   Binding{ValueSpace::Literal, slot}});
                }
            };
            if (s_fixed != kNoId)
                for (uint64_t entry : chain.find_subject(s_begin, s_end, s_fixed))
                    emit_entry(entry);
            else
                for (uint64_t entry = s_begin; entry < s_end; ++entry) emit_entry(entry);
        }
    }

    const KnowledgeBase& kb_;
    const PlanStep& step_;
    const TriplePattern& tp_;
};

// Projects pattern matches onto the pattern's variable columns, dropping
// matches that bind a repeated variable inconsistently.
void project_matches(const KnowledgeBase& kb, const TriplePattern& tp,
                     const std::vector<Match>& matches,
                     const std::vector<std::string>& columns,
                     std::vector<BindingTable::Row>& rows) {
    std::array<const PatternTerm*, 3> slots{&tp.subject, &tp.predicate, &tp.object};
    for (const Match& m : matches) {
        BindingTable::Row row(columns.size());
        bool ok = true;
        std::vector<bool> seen(columns.size(), false);
        for (std::size_t pos = 0; pos < 3 && ok; ++pos) {
            if (!slots[pos]->is_variable) continue;
            const std::size_t col =
                std::find(columns.begin(), columns.end(), slots[pos]->var) - columns.begin();
            if (seen[col]) {
                ok = value_eq(kb, row[col], m[pos]);
            } else {
                row[col] = m[pos];
                seen[col] = true;
            }
        }
        if (ok) rows.push_back(std::move(row));
    }
}

void sort_rows(const KnowledgeBase& kb, std::vector<BindingTable::Row>& rows,
               std::size_t first_col) {
    auto row_less = [&](const BindingTable::Row& a, const BindingTable::Row& b) {
        if (value_less(kb, a[first_col], b[first_col])) return true;
        if (value_less(kb, b[first_col], a[first_col])) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == first_col) continue;
            if (value_less(kb, a[i], b[i])) return true;
            if (value_less(kb, b[i], a[i])) return false;
        }
        return false;
    };
    std::sort(rows.begin(), rows.end(), row_less);
}

void dedup_rows(const KnowledgeBase& kb, std::vector<BindingTable::Row>& rows) {
    auto row_eq = [&](const BindingTable::Row& a, const BindingTable::Row& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!value_eq(kb, a[i], b[i])) return false;
        return true;
    };
    rows.erase(std::unique(rows.begin(), rows.end(), row_eq), rows.end());
}

std::optional<double> numeric_value(const KnowledgeBase& kb, const Binding& b) {
    if (b.space != ValueSpace::Literal) return std::nullopt;
    const std::string& lex = kb.literal_table(b.id).value;
    std::string_view sv = lex;
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || sv.empty()) return std::nullopt;
    return v;
}

// Three-valued filter evaluation: nullopt when a comparison cannot be decided.
std::optional<bool> eval_filter(const KnowledgeBase& kb, const FilterExpr& f,
                                const BindingTable& table, const BindingTable::Row& row) {
    switch (f.node) {
        case FilterExpr::Node::And: {
            const auto a = eval_filter(kb, *f.lhs, table, row);
            const auto b = eval_filter(kb, *f.rhs, table, row);
            if (a == std::optional<bool>(false) || b == std::optional<bool>(false)) return false;
            if (!a || !b) return std::nullopt;
            return *a && *b;
        }
        case FilterExpr::Node::Or: {
            const auto a = eval_filter(kb, *f.lhs, table, row);
            const auto b = eval_filter(kb, *f.rhs, table, row);
            if (a == std::optional<bool>(true) || b == std::optional<bool>(true)) return true;
            if (!a || !b) return std::nullopt;
            return *a || *b;
        }
        case FilterExpr::Node::IdInterval: {
            const std::size_t col = table.column_index(f.var);
            if (col == BindingTable::npos) return std::nullopt;
            const Binding& b = row[col];
            if (b.space == ValueSpace::Unbound) return std::nullopt;
            return b.id >= f.lower && b.id < f.upper;
        }
        case FilterExpr::Node::Compare: break;
    }
    const std::size_t col = table.column_index(f.var);
    if (col == BindingTable::npos) return std::nullopt;
    const std::optional<double> lhs = numeric_value(kb, row[col]);
    if (!lhs) return std::nullopt;
    double rhs;
    if (f.rhs_is_var) {
        const std::size_t rcol = table.column_index(f.rhs_var);
        if (rcol == BindingTable::npos) return std::nullopt;
        const std::optional<double> rv = numeric_value(kb, row[rcol]);
        if (!rv) return std::nullopt;
        rhs = *rv;
    } else {
        rhs = f.number;
    }
    switch (f.op) {
        case parser::CompareOp::Lt: return *lhs < rhs;
        case parser::CompareOp::Le: return *lhs <= rhs;
        case parser::CompareOp::Gt: return *lhs > rhs;
        case parser::CompareOp::Ge: return *lhs >= rhs;
        case parser::CompareOp::Eq: return *lhs == rhs;
        case parser::CompareOp::Ne: return *lhs != rhs;
    }
    return std::nullopt;
}

#ifndef NDEBUG
void assert_sorted(const KnowledgeBase& kb, const BindingTable& table) {
    if (!table.sorted_by) return;
    const std::size_t col = table.column_index(*table.sorted_by);
    assert(col != BindingTable::npos);
    for (std::size_t i = 1; i < table.rows().size(); ++i)
        assert(!value_less(kb, table.rows()[i][col], table.rows()[i - 1][col]));
}
#endif

}  // namespace

BindingTable evaluate_step_base(const PlanStep& step, const TriplePattern& tp,
                                const KnowledgeBase& kb) {
    PatternMatcher matcher(kb, step, tp);
    const std::vector<Match> matches = matcher.match(std::nullopt, std::nullopt, std::nullopt);

    BindingTable table(pattern_columns(tp));
    project_matches(kb, tp, matches, table.columns(), table.rows());

    // Sort on the natural column of the access path; repeated hits across a
    // widened cover collapse here.
    std::string sorted;
    switch (optimizer::choose_access(tp, !tp.subject.is_variable, !tp.predicate.is_variable,
                                     !tp.object.is_variable)) {
        case AccessMethod::TypeByConcept:
        case AccessMethod::SubjectsByPO:
        case AccessMethod::PairsByProperty:
            sorted = tp.subject.var;
            break;
        case AccessMethod::TypeBySubject:
        case AccessMethod::TypeScan:
        case AccessMethod::ObjectsBySP:
            sorted = tp.object.var;
            break;
        case AccessMethod::PredicateScan:
            sorted = tp.predicate.var;
            break;
        default:
            break;
    }
    if (!table.columns().empty()) {
        const std::size_t first =
            sorted.empty() ? 0 : table.column_index(sorted);
        sort_rows(kb, table.rows(), first == BindingTable::npos ? 0 : first);
        if (matcher.needs_dedup()) dedup_rows(kb, table.rows());
    }
    if (!sorted.empty()) table.sorted_by = sorted;
    return table;
}

BindingTable merge_join(const KnowledgeBase& kb, const BindingTable& left,
                        const BindingTable& right, const std::string& var) {
#ifndef NDEBUG
    assert_sorted(kb, left);
    assert_sorted(kb, right);
#endif
    const std::size_t lcol = left.column_index(var);
    const std::size_t rcol = right.column_index(var);
    if (lcol == BindingTable::npos || rcol == BindingTable::npos)
        throw IntegrityError("merge join variable missing from an input");

    std::vector<std::string> columns = left.columns();
    std::vector<std::size_t> rnew;  // right columns to append
    for (std::size_t i = 0; i < right.columns().size(); ++i)
        if (!left.has_column(right.columns()[i])) {
            rnew.push_back(i);
            columns.push_back(right.columns()[i]);
        }

    BindingTable out(std::move(columns));
    const auto& lrows = left.rows();
    const auto& rrows = right.rows();
    std::size_t li = 0, ri = 0;
    while (li < lrows.size() && ri < rrows.size()) {
        const Binding& lv = lrows[li][lcol];
        const Binding& rv = rrows[ri][rcol];
        if (value_less(kb, lv, rv)) {
            ++li;
            continue;
        }
        if (value_less(kb, rv, lv)) {
            ++ri;
            continue;
        }
        // equal key runs: cross product
        std::size_t lj = li, rj = ri;
        while (lj < lrows.size() && value_eq(kb, lrows[lj][lcol], lv)) ++lj;
        while (rj < rrows.size() && value_eq(kb, rrows[rj][rcol], rv)) ++rj;
        for (std::size_t a = li; a < lj; ++a) {
            for (std::size_t b = ri; b < rj; ++b) {
                bool consistent = true;
                for (std::size_t i = 0; i < right.columns().size() && consistent; ++i) {
                    const std::size_t lc = out.column_index(right.columns()[i]);
                    if (lc < left.columns().size() && i != rcol)
                        consistent = value_eq(kb, lrows[a][lc], rrows[b][i]);
                }
                if (!consistent) continue;
                BindingTable::Row row = lrows[a];
                for (std::size_t i : rnew) row.push_back(rrows[b][i]);
                out.rows().push_back(std::move(row));
            }
        }
        li = lj;
        ri = rj;
    }
    out.sorted_by = var;
    return out;
}

BindingTable nested_loop_join(const KnowledgeBase& kb, const BindingTable& left,
                              const PlanStep& step, const TriplePattern& tp) {
    std::vector<std::string> columns = left.columns();
    std::vector<std::string> fresh;
    for (const std::string& v : pattern_columns(tp))
        if (!left.has_column(v)) {
            fresh.push_back(v);
            columns.push_back(v);
        }

    BindingTable out(std::move(columns));
    PatternMatcher matcher(kb, step, tp);
    const bool dedup = matcher.needs_dedup();

    auto bound = [&](const PatternTerm& p, const BindingTable::Row& row) {
        std::optional<Binding> b;
        if (p.is_variable) {
            const std::size_t col = left.column_index(p.var);
            if (col != BindingTable::npos) b = row[col];
        }
        return b;
    };

    std::vector<BindingTable::Row> extension;
    for (const BindingTable::Row& lrow : left.rows()) {
        const std::vector<Match> matches = matcher.match(
            bound(tp.subject, lrow), bound(tp.predicate, lrow), bound(tp.object, lrow));

        extension.clear();
        BindingTable ext(pattern_columns(tp));
        project_matches(kb, tp, matches, ext.columns(), extension);

        // Row-level consistency with the left side, then projection to the
        // fresh columns only.
        std::vector<BindingTable::Row> additions;
        for (const BindingTable::Row& erow : extension) {
            bool consistent = true;
            for (std::size_t i = 0; i < ext.columns().size() && consistent; ++i) {
                const std::size_t lc = left.column_index(ext.columns()[i]);
                if (lc != BindingTable::npos) consistent = value_eq(kb, lrow[lc], erow[i]);
            }
            if (!consistent) continue;
            BindingTable::Row add;
            add.reserve(fresh.size());
            for (const std::string& v : fresh)
                add.push_back(erow[ext.column_index(v)]);
            additions.push_back(std::move(add));
        }
        if (dedup && !fresh.empty()) {
            sort_rows(kb, additions, 0);
            dedup_rows(kb, additions);
        } else if (dedup && fresh.empty() && additions.size() > 1) {
            additions.resize(1);  // pure existence check
        }
        for (BindingTable::Row& add : additions) {
            BindingTable::Row row = lrow;
            row.insert(row.end(), add.begin(), add.end());
            out.rows().push_back(std::move(row));
        }
    }
    out.sorted_by = left.sorted_by;  // left order is preserved
    return out;
}

void apply_filter(BindingTable& table, const FilterExpr& filter, const KnowledgeBase& kb,
                  ExecutionReport* report) {
    std::vector<BindingTable::Row> kept;
    kept.reserve(table.rows().size());
    for (BindingTable::Row& row : table.rows()) {
        const std::optional<bool> verdict = eval_filter(kb, filter, table, row);
        if (verdict.value_or(false))
            kept.push_back(std::move(row));
        else if (!verdict && report)
            ++report->skipped_non_numeric;
    }
    table.rows().swap(kept);
}

BindingTable execute(const JoinPlan& plan, const KnowledgeBase& kb, ExecutionReport* report) {
    if (plan.steps.empty()) return BindingTable{};
    const parser::QueryAst& ast = *plan.ast;

    BindingTable table;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const PlanStep& step = plan.steps[i];
        const TriplePattern& tp = ast.patterns[step.tp_index];
        switch (step.join) {
            case JoinStrategy::Seed:
                table = evaluate_step_base(step, tp, kb);
                break;
            case JoinStrategy::Merge:
                table = merge_join(kb, table, evaluate_step_base(step, tp, kb),
                                   step.join_variable);
                break;
            case JoinStrategy::NestedLoop:
                table = nested_loop_join(kb, table, step, tp);
                break;
        }
        for (std::size_t f : step.filters_after) apply_filter(table, ast.filters[f], kb, report);
        if (report) report->rows_per_step.push_back(table.row_count());
    }
    return table;
}

std::vector<std::vector<std::string>> decode(const BindingTable& table,
                                             const std::vector<std::string>& columns,
                                             const KnowledgeBase& kb) {
    std::vector<std::size_t> idx;
    idx.reserve(columns.size());
    for (const std::string& v : columns) idx.push_back(table.column_index(v));

    std::vector<std::vector<std::string>> out;
    out.reserve(table.row_count());
    for (const BindingTable::Row& row : table.rows()) {
        std::vector<std::string> decoded;
        decoded.reserve(columns.size());
        for (std::size_t col : idx) {
            if (col == BindingTable::npos) {
                decoded.emplace_back();
                continue;
            }
            const Binding& b = row[col];
            switch (b.space) {
                case ValueSpace::Instance: decoded.push_back(kb.instances().extract(b.id)); break;
                case ValueSpace::Concept: decoded.push_back(kb.concepts().extract(b.id)); break;
                case ValueSpace::Property:
                    decoded.push_back(b.id == kRdfTypePropertyId ? parser::kRdfType
                                                                 : kb.properties().extract(b.id));
                    break;
                case ValueSpace::Literal: decoded.push_back(kb.literal_table(b.id).value); break;
                case ValueSpace::Unbound: decoded.emplace_back(); break;
            }
        }
        out.push_back(std::move(decoded));
    }
    return out;
}

QueryResult run(const JoinPlan& plan, const KnowledgeBase& kb) {
    QueryResult result;
    result.columns = plan.ast->output_columns();
    BindingTable table = execute(plan, kb, &result.report);
    result.rows = decode(table, result.columns, kb);
    if (plan.ast->distinct) {
        std::sort(result.rows.begin(), result.rows.end());
        result.rows.erase(std::unique(result.rows.begin(), result.rows.end()),
                          result.rows.end());
    }
    return result;
}

}  // namespace skg::executor
