#include "skg/litemat/dictionary.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <set>

#include "skg/bytes.hpp"
#include "skg/errors.hpp"
#include "skg/litemat/ontology.hpp"
#include "skg/sds/io.hpp"

namespace skg::litemat {

namespace {

const std::string& root_uri(TermKind kind) {
    static const std::string concept_root = kConceptRoot;
    static const std::string property_root = kPropertyRoot;
    return kind == TermKind::Concept ? concept_root : property_root;
}

}  // namespace

Dictionary Dictionary::instances() {
    Dictionary d;
    d.kind_ = TermKind::Instance;
    return d;
}

uint64_t Dictionary::add_instance(const std::string& key) {
    if (kind_ != TermKind::Instance)
        throw KindError("add_instance on a hierarchy dictionary");
    auto it = forward_.find(key);
    if (it != forward_.end()) return it->second.id;
    const uint64_t id = next_instance_id_++;
    forward_.emplace(key, EncodedTerm{id, 0, TermKind::Instance});
    inverse_.emplace(id, key);
    total_bits_ = static_cast<uint8_t>(std::bit_width(id));
    return id;
}

Dictionary Dictionary::encode_hierarchy(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::vector<std::string>& orphans, TermKind kind) {
    if (kind == TermKind::Instance)
        throw KindError("encode_hierarchy needs a concept or property kind");

    const std::string& root = root_uri(kind);

    // Collect terms and parent sets. Statements demoting the root are dropped:
    // the implicit root is the top of the hierarchy by definition.
    std::set<std::string> terms(orphans.begin(), orphans.end());
    std::map<std::string, std::set<std::string>> parents;
    std::map<std::string, std::set<std::string>> out_edges;  // child -> parents, for cycle check
    for (const auto& [child, parent] : edges) {
        if (child == root) continue;
        terms.insert(child);
        if (parent != root) terms.insert(parent);
        parents[child].insert(parent);
        out_edges[child].insert(parent);
    }
    terms.erase(root);

    // Cycle detection over the full (multi-parent) edge relation.
    {
        std::map<std::string, int> state;  // 0 unseen, 1 on stack, 2 done
        std::vector<std::pair<std::string, std::set<std::string>::const_iterator>> stack;
        for (const auto& [start, _] : out_edges) {
            if (state[start]) continue;
            state[start] = 1;
            stack.emplace_back(start, out_edges[start].begin());
            while (!stack.empty()) {
                auto& [node, it] = stack.back();
                auto edge_it = out_edges.find(node);
                if (edge_it == out_edges.end() || it == edge_it->second.end()) {
                    state[node] = 2;
                    stack.pop_back();
                    continue;
                }
                const std::string& next = *it++;
                if (next == root) continue;
                if (state[next] == 1)
                    throw EncodingError("subsumption cycle through '" + next + "'");
                if (state[next] == 0) {
                    state[next] = 1;
                    stack.emplace_back(next, out_edges[next].begin());
                }
            }
        }
    }

    // Primary tree: lexicographically smallest parent wins, the rest become
    // extra edges honored at rewrite time.
    std::map<std::string, std::vector<std::string>> children;
    std::vector<std::pair<std::string, std::string>> extra;  // (parent, child)
    for (const std::string& term : terms) {
        auto it = parents.find(term);
        if (it == parents.end() || it->second.empty()) {
            children[root].push_back(term);
            continue;
        }
        const std::string& primary = *it->second.begin();
        children[primary].push_back(term);
        for (auto pit = std::next(it->second.begin()); pit != it->second.end(); ++pit)
            if (*pit != primary) extra.emplace_back(*pit, term);
    }

    Dictionary d;
    d.kind_ = kind;

    struct Assigned {
        uint64_t path;
        uint8_t bits;
    };
    std::map<std::string, Assigned> assigned;
    assigned[root] = {1, 1};

    // Top-down, children coded 1..n on bit_width(n) bits; code 0 stays
    // reserved so a child can never collide with its parent's padded id.
    std::vector<std::string> queue{root};
    uint8_t max_bits = 1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::string node = queue[q];
        auto cit = children.find(node);
        if (cit == children.end()) continue;
        std::vector<std::string>& kids = cit->second;
        std::sort(kids.begin(), kids.end());
        const unsigned local_bits = std::bit_width(kids.size());
        const Assigned parent = assigned.at(node);
        if (parent.bits + local_bits > 64)
            throw EncodingError("hierarchy too deep: identifiers exceed 64 bits");
        for (std::size_t i = 0; i < kids.size(); ++i) {
            assigned[kids[i]] = {(parent.path << local_bits) | (i + 1),
                                 static_cast<uint8_t>(parent.bits + local_bits)};
            queue.push_back(kids[i]);
            max_bits = std::max<uint8_t>(max_bits, parent.bits + local_bits);
        }
    }
    if (assigned.size() != terms.size() + 1)
        throw EncodingError("hierarchy contains a cycle disconnected from the root");

    d.total_bits_ = max_bits;
    for (const auto& [uri, a] : assigned) {
        const uint64_t id = a.path << (max_bits - a.bits);
        d.forward_.emplace(uri, EncodedTerm{id, a.bits, kind});
        d.inverse_.emplace(id, uri);
    }
    for (const auto& [parent, child] : extra)
        d.extra_edges_.emplace_back(d.forward_.at(parent).id, d.forward_.at(child).id);
    std::sort(d.extra_edges_.begin(), d.extra_edges_.end());
    return d;
}

std::optional<EncodedTerm> Dictionary::find(std::string_view uri) const {
    auto it = forward_.find(std::string(uri));
    if (it == forward_.end()) return std::nullopt;
    return it->second;
}

EncodedTerm Dictionary::locate(std::string_view uri) const {
    auto term = find(uri);
    if (!term) throw LookupError("term not in dictionary: " + std::string(uri));
    return *term;
}

const std::string& Dictionary::extract(uint64_t id) const {
    auto it = inverse_.find(id);
    if (it == inverse_.end())
        throw LookupError("id not in dictionary: " + std::to_string(id));
    return it->second;
}

bool Dictionary::contains_id(uint64_t id) const { return inverse_.count(id) != 0; }

IdInterval Dictionary::interval_of(const EncodedTerm& term) const {
    if (term.kind == TermKind::Instance)
        throw UnsupportedFeature("subsumption interval of an instance term");
    const unsigned free_bits = total_bits_ - term.used_length;
    return {term.id, term.id + (uint64_t(1) << free_bits)};
}

IdInterval Dictionary::interval_of(std::string_view uri) const {
    return interval_of(locate(uri));
}

bool Dictionary::covered(const std::vector<IdInterval>& intervals, uint64_t id) const {
    for (const IdInterval& iv : intervals)
        if (iv.contains(id)) return true;
    return false;
}

std::vector<IdInterval> Dictionary::subsumption_intervals(uint64_t id) const {
    auto it = inverse_.find(id);
    if (it == inverse_.end())
        throw LookupError("id not in dictionary: " + std::to_string(id));
    EncodedTerm term = forward_.at(it->second);

    std::vector<IdInterval> cover{interval_of(term)};
    // Pull in subtrees grafted below any covered node through extra parents.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [parent, child] : extra_edges_) {
            if (covered(cover, parent) && !covered(cover, child)) {
                cover.push_back(interval_of(forward_.at(inverse_.at(child))));
                changed = true;
            }
        }
    }
    std::sort(cover.begin(), cover.end());
    std::vector<IdInterval> merged;
    for (const IdInterval& iv : cover) {
        if (!merged.empty() && iv.lower <= merged.back().upper)
            merged.back().upper = std::max(merged.back().upper, iv.upper);
        else
            merged.push_back(iv);
    }
    return merged;
}

std::vector<IdInterval> Dictionary::subsumption_intervals(std::string_view uri) const {
    return subsumption_intervals(locate(uri).id);
}

RangeConstraint Dictionary::rewrite_constraint(std::string_view uri) const {
    const EncodedTerm term = locate(uri);
    return {"__ival" + std::to_string(term.id), subsumption_intervals(term.id)};
}

void Dictionary::set_occurrence(uint64_t id, uint64_t count) { occurrence_[id] = count; }

void Dictionary::add_occurrence(uint64_t id, uint64_t delta) { occurrence_[id] += delta; }

uint64_t Dictionary::occurrence(uint64_t id) const {
    auto it = occurrence_.find(id);
    return it == occurrence_.end() ? 0 : it->second;
}

std::unordered_map<uint64_t, uint64_t> Dictionary::aggregate_statistics() const {
    std::unordered_map<uint64_t, uint64_t> totals;
    if (kind_ == TermKind::Instance) {
        for (const auto& [id, _] : inverse_) totals[id] = occurrence(id);
        return totals;
    }
    // Prefix sums over the sorted assigned ids make each interval a range sum.
    std::vector<uint64_t> ids;
    std::vector<uint64_t> prefix{0};
    ids.reserve(inverse_.size());
    for (const auto& [id, _] : inverse_) {
        ids.push_back(id);
        prefix.push_back(prefix.back() + occurrence(id));
    }
    for (const auto& [id, _] : inverse_) {
        uint64_t total = 0;
        for (const IdInterval& iv : subsumption_intervals(id)) {
            const auto lo = std::lower_bound(ids.begin(), ids.end(), iv.lower) - ids.begin();
            const auto hi = std::lower_bound(ids.begin(), ids.end(), iv.upper) - ids.begin();
            total += prefix[hi] - prefix[lo];
        }
        totals[id] = total;
    }
    return totals;
}

void Dictionary::finalize_statistics() { totals_ = aggregate_statistics(); }

uint64_t Dictionary::total_occurrence(uint64_t id) const {
    auto it = totals_.find(id);
    return it == totals_.end() ? occurrence(id) : it->second;
}

std::vector<uint64_t> Dictionary::ids_in(const IdInterval& interval) const {
    std::vector<uint64_t> ids;
    for (auto it = inverse_.lower_bound(interval.lower);
         it != inverse_.end() && it->first < interval.upper; ++it)
        ids.push_back(it->first);
    return ids;
}

void Dictionary::save(std::ostream& out) const {
    sds::write_header(out, sds::StructureTag::DictionaryTag);
    bytes::write_u8(out, static_cast<uint8_t>(kind_));
    bytes::write_u8(out, total_bits_);
    bytes::write_u64(out, inverse_.size());
    for (const auto& [id, uri] : inverse_) bytes::write_string(out, uri);
    for (const auto& [id, uri] : inverse_) {
        const EncodedTerm& term = forward_.at(uri);
        bytes::write_u64(out, id);
        bytes::write_u8(out, term.used_length);
        bytes::write_u64(out, occurrence(id));
    }
    bytes::write_u64(out, extra_edges_.size());
    for (const auto& [parent, child] : extra_edges_) {
        bytes::write_u64(out, parent);
        bytes::write_u64(out, child);
    }
}

Dictionary Dictionary::load(std::istream& in) {
    sds::expect_tag(in, sds::StructureTag::DictionaryTag);
    Dictionary d;
    const uint8_t kind = bytes::read_u8(in);
    if (kind > 2) throw FormatError("bad dictionary kind");
    d.kind_ = static_cast<TermKind>(kind);
    d.total_bits_ = bytes::read_u8(in);
    const uint64_t n = bytes::read_u64(in);
    std::vector<std::string> uris;
    uris.reserve(n);
    for (uint64_t i = 0; i < n; ++i) uris.push_back(bytes::read_string(in));
    for (uint64_t i = 0; i < n; ++i) {
        const uint64_t id = bytes::read_u64(in);
        const uint8_t used = bytes::read_u8(in);
        const uint64_t occ = bytes::read_u64(in);
        if (!d.inverse_.emplace(id, uris[i]).second)
            throw FormatError("duplicate id in dictionary");
        d.forward_.emplace(uris[i], EncodedTerm{id, used, d.kind_});
        if (occ) d.occurrence_[id] = occ;
        if (d.kind_ == TermKind::Instance)
            d.next_instance_id_ = std::max(d.next_instance_id_, id + 1);
    }
    const uint64_t extras = bytes::read_u64(in);
    for (uint64_t i = 0; i < extras; ++i) {
        const uint64_t parent = bytes::read_u64(in);
        const uint64_t child = bytes::read_u64(in);
        d.extra_edges_.emplace_back(parent, child);
    }
    if (d.kind_ != TermKind::Instance) d.finalize_statistics();
    return d;
}

bool Dictionary::operator==(const Dictionary& other) const {
    return kind_ == other.kind_ && total_bits_ == other.total_bits_ &&
           inverse_ == other.inverse_ && extra_edges_ == other.extra_edges_ &&
           occurrence_ == other.occurrence_;
}

}  // namespace skg::litemat
