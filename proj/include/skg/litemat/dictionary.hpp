#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace skg::litemat {

enum class TermKind : uint8_t { Concept = 0, Property = 1, Instance = 2 };

struct EncodedTerm {
    uint64_t id = 0;
    uint8_t used_length = 0;  // bits before zero-padding; 0 for instances
    TermKind kind = TermKind::Instance;

    bool operator==(const EncodedTerm&) const = default;
};

// Half-open id range [lower, upper); lower is the owning term's id.
struct IdInterval {
    uint64_t lower = 0;
    uint64_t upper = 0;

    [[nodiscard]] bool contains(uint64_t id) const { return id >= lower && id < upper; }
    [[nodiscard]] uint64_t width() const { return upper - lower; }

    auto operator<=>(const IdInterval&) const = default;
};

// Interval-filter form of a hierarchy constant: a fresh variable constrained
// to the subsumption intervals (several of them under multiple inheritance).
struct RangeConstraint {
    std::string variable;
    std::vector<IdInterval> intervals;
};

// Bidirectional URI <-> id map. Hierarchy dictionaries carry prefix-coded ids
// where a child's id embeds its parent's used-length prefix, so subsumption
// becomes an interval test on the identifier; instance dictionaries assign
// arbitrary ids by first appearance, starting at 1 (0 means "absent").
// Built single-threaded at load time, immutable afterwards.
class Dictionary {
public:
    Dictionary() = default;

    // Encodes one hierarchy top-down. `edges` are (child, parent) pairs;
    // `orphans` are terms with no declared parent (attached to the implicit
    // root). Throws EncodingError on cycles or ids wider than 64 bits.
    static Dictionary encode_hierarchy(
        const std::vector<std::pair<std::string, std::string>>& edges,
        const std::vector<std::string>& orphans, TermKind kind);

    static Dictionary instances();

    // Instance dictionaries only: returns the existing or newly assigned id.
    uint64_t add_instance(const std::string& key);

    [[nodiscard]] std::optional<EncodedTerm> find(std::string_view uri) const;
    [[nodiscard]] EncodedTerm locate(std::string_view uri) const;  // throws LookupError
    [[nodiscard]] const std::string& extract(uint64_t id) const;   // throws LookupError
    [[nodiscard]] bool contains_id(uint64_t id) const;

    // [id, id + 2^(L - used_length)) — two shifts and an addition.
    [[nodiscard]] IdInterval interval_of(std::string_view uri) const;
    [[nodiscard]] IdInterval interval_of(const EncodedTerm& term) const;

    // Subsumption cover as a union of disjoint intervals; more than one entry
    // only when extra parents grafted foreign subtrees below this term.
    [[nodiscard]] std::vector<IdInterval> subsumption_intervals(std::string_view uri) const;
    [[nodiscard]] std::vector<IdInterval> subsumption_intervals(uint64_t id) const;

    [[nodiscard]] RangeConstraint rewrite_constraint(std::string_view uri) const;

    // Occurrence statistics. Direct counts are set during the store build;
    // finalize_statistics() folds them over the subsumption closure.
    void set_occurrence(uint64_t id, uint64_t count);
    void add_occurrence(uint64_t id, uint64_t delta = 1);
    [[nodiscard]] uint64_t occurrence(uint64_t id) const;
    void finalize_statistics();
    [[nodiscard]] uint64_t total_occurrence(uint64_t id) const;
    [[nodiscard]] std::unordered_map<uint64_t, uint64_t> aggregate_statistics() const;

    [[nodiscard]] TermKind kind() const { return kind_; }
    [[nodiscard]] uint8_t total_bits() const { return total_bits_; }
    [[nodiscard]] uint64_t size() const { return inverse_.size(); }
    [[nodiscard]] const std::map<uint64_t, std::string>& entries() const { return inverse_; }
    [[nodiscard]] const std::vector<std::pair<uint64_t, uint64_t>>& extra_edges() const {
        return extra_edges_;
    }

    // Assigned ids falling inside [interval.lower, interval.upper).
    [[nodiscard]] std::vector<uint64_t> ids_in(const IdInterval& interval) const;

    void save(std::ostream& out) const;
    static Dictionary load(std::istream& in);

    bool operator==(const Dictionary& other) const;

private:
    [[nodiscard]] bool covered(const std::vector<IdInterval>& intervals, uint64_t id) const;

    TermKind kind_ = TermKind::Instance;
    uint8_t total_bits_ = 0;  // L; instance dictionaries keep 0
    std::unordered_map<std::string, EncodedTerm> forward_;
    std::map<uint64_t, std::string> inverse_;
    std::vector<std::pair<uint64_t, uint64_t>> extra_edges_;  // (parent id, child id)
    std::unordered_map<uint64_t, uint64_t> occurrence_;
    std::unordered_map<uint64_t, uint64_t> totals_;
    uint64_t next_instance_id_ = 1;
};

}  // namespace skg::litemat
