#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skg/optimizer/planner.hpp"
#include "skg/parser/sparql.hpp"
#include "skg/store/knowledge_base.hpp"

namespace skg::executor {

// Which dictionary (or the literal table) a bound id lives in. Joins and
// DISTINCT compare literals by value, everything else by (space, id).
enum class ValueSpace : uint8_t {
    Instance = 0,
    Concept = 1,
    Property = 2,
    Literal = 3,  // id is a literal-table slot
    Unbound = 4,
};

struct Binding {
    ValueSpace space = ValueSpace::Unbound;
    uint64_t id = 0;

    auto operator<=>(const Binding&) const = default;
};

// Hierarchy ids always carry the root's leading bit, so 0 never names a real
// property; a predicate variable matching an rdf:type triple binds to it.
inline constexpr uint64_t kRdfTypePropertyId = 0;

// Ordered intermediate relation flowing through the joins.
class BindingTable {
public:
    using Row = std::vector<Binding>;

    BindingTable() = default;
    explicit BindingTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
    [[nodiscard]] std::size_t column_index(const std::string& var) const;
    [[nodiscard]] bool has_column(const std::string& var) const;

    [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }
    std::vector<Row>& rows() { return rows_; }
    [[nodiscard]] std::size_t row_count() const { return rows_.size(); }

    std::optional<std::string> sorted_by;  // ascending column, when guaranteed

    static constexpr std::size_t npos = ~std::size_t(0);

private:
    std::vector<std::string> columns_;
    std::vector<Row> rows_;
};

struct ExecutionReport {
    uint64_t skipped_non_numeric = 0;  // rows dropped by filters they could not evaluate
    std::vector<uint64_t> rows_per_step;
};

// Value-semantics comparisons (literal bindings compare by their term).
bool value_eq(const store::KnowledgeBase& kb, const Binding& a, const Binding& b);
bool value_less(const store::KnowledgeBase& kb, const Binding& a, const Binding& b);

// Evaluates one plan step standalone (constants only); rows come out sorted
// on the access path's natural column. Seeds the pipeline and feeds the right
// side of merge joins.
BindingTable evaluate_step_base(const optimizer::PlanStep& step, const parser::TriplePattern& tp,
                                const store::KnowledgeBase& kb);

// Sorted-merge equi-join on `var`; both inputs must be ascending on it.
BindingTable merge_join(const store::KnowledgeBase& kb, const BindingTable& left,
                        const BindingTable& right, const std::string& var);

// Per-row substitution join: binds the step's pattern with each left row and
// concatenates the matches. Preserves the left ordering.
BindingTable nested_loop_join(const store::KnowledgeBase& kb, const BindingTable& left,
                              const optimizer::PlanStep& step, const parser::TriplePattern& tp);

// Keeps rows satisfying the expression; rows whose comparison cannot be
// evaluated (unbound variable, non-numeric literal) are dropped and counted.
void apply_filter(BindingTable& table, const parser::FilterExpr& filter,
                  const store::KnowledgeBase& kb, ExecutionReport* report);

BindingTable execute(const optimizer::JoinPlan& plan, const store::KnowledgeBase& kb,
                     ExecutionReport* report = nullptr);

// Lexical forms per projected column; unbound columns decode to "".
std::vector<std::vector<std::string>> decode(const BindingTable& table,
                                             const std::vector<std::string>& columns,
                                             const store::KnowledgeBase& kb);

struct QueryResult {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    ExecutionReport report;
};

// Plan execution plus projection, DISTINCT and dictionary decoding.
QueryResult run(const optimizer::JoinPlan& plan, const store::KnowledgeBase& kb);

}  // namespace skg::executor
