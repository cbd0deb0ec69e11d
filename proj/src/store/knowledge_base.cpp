#include "skg/store/knowledge_base.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "skg/bytes.hpp"
#include "skg/errors.hpp"
#include "skg/litemat/rules.hpp"
#include "skg/sds/io.hpp"

namespace skg::store {

using litemat::Dictionary;
using litemat::IdInterval;
using litemat::TermKind;
using parser::RawTriple;
using parser::Term;

// --------------------------------------------------------------------------
// ChainIndex

ChainIndex::ChainIndex(sds::WaveletTree properties, sds::BitMap ps_marks,
                       sds::WaveletTree subjects, sds::BitMap so_marks, uint64_t object_slots)
    : properties_(std::move(properties)),
      ps_marks_(std::move(ps_marks)),
      subjects_(std::move(subjects)),
      so_marks_(std::move(so_marks)),
      object_slots_(object_slots) {
    if (ps_marks_.count(true) != properties_.size())
        throw IntegrityError("PS bitmap must carry one set bit per property block");
    if (so_marks_.count(true) != subjects_.size())
        throw IntegrityError("SO bitmap must carry one set bit per subject entry");
    if (ps_marks_.size() != subjects_.size() || so_marks_.size() != object_slots_)
        throw IntegrityError("chain layer lengths disagree");
}

uint64_t ChainIndex::property_position(uint64_t p) const {
    const uint64_t pos = properties_.select(1, p);
    return pos == properties_.size() ? npos : pos;
}

uint64_t ChainIndex::lower_bound_block(uint64_t id) const {
    uint64_t lo = 0, hi = properties_.size();
    while (lo < hi) {
        const uint64_t mid = (lo + hi) / 2;
        if (properties_.access(mid) < id)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

std::pair<uint64_t, uint64_t> ChainIndex::subject_range(uint64_t prop_pos) const {
    return {ps_marks_.select(prop_pos + 1, 1), ps_marks_.select(prop_pos + 2, 1)};
}

std::pair<uint64_t, uint64_t> ChainIndex::object_range(uint64_t subject_entry) const {
    return {so_marks_.select(subject_entry + 1, 1), so_marks_.select(subject_entry + 2, 1)};
}

std::pair<uint64_t, uint64_t> ChainIndex::block_object_range(uint64_t s_begin,
                                                             uint64_t s_end) const {
    return {so_marks_.select(s_begin + 1, 1), so_marks_.select(s_end + 1, 1)};
}

std::vector<uint64_t> ChainIndex::find_subject(uint64_t s_begin, uint64_t s_end,
                                               uint64_t s) const {
    return subjects_.range_search(s_begin, s_end, s);
}

uint64_t ChainIndex::entry_of_slot(uint64_t slot) const {
    return so_marks_.rank(slot + 1, 1) - 1;
}

uint64_t ChainIndex::triple_count(uint64_t p) const {
    const uint64_t pos = property_position(p);
    if (pos == npos) return 0;
    const auto [s_begin, s_end] = subject_range(pos);
    const auto [o_begin, o_end] = block_object_range(s_begin, s_end);
    return o_end - o_begin;
}

void ChainIndex::save(std::ostream& out) const {
    sds::save(properties_, out);
    sds::save(ps_marks_, out);
    sds::save(subjects_, out);
    sds::save(so_marks_, out);
}

ChainIndex ChainIndex::load(std::istream& in) {
    sds::WaveletTree properties = sds::load_wavelet_tree(in);
    sds::BitMap ps = sds::load_bitmap(in);
    sds::WaveletTree subjects = sds::load_wavelet_tree(in);
    sds::BitMap so = sds::load_bitmap(in);
    const uint64_t slots = so.size();
    return ChainIndex(std::move(properties), std::move(ps), std::move(subjects), std::move(so),
                      slots);
}

// --------------------------------------------------------------------------
// RdfTypeStore

void RdfTypeStore::build(std::vector<std::pair<uint64_t, uint64_t>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    by_concept_.clear();
    by_subject_.clear();
    triple_count_ = pairs.size();
    for (const auto& [concept_id, subject_id] : pairs) {
        by_concept_[concept_id].push_back(subject_id);
        by_subject_[subject_id].push_back(concept_id);
    }
    for (auto& [_, subjects] : by_concept_) std::sort(subjects.begin(), subjects.end());
    for (auto& [_, concepts] : by_subject_) std::sort(concepts.begin(), concepts.end());
}

const std::vector<uint64_t>* RdfTypeStore::subjects_of(uint64_t concept_id) const {
    auto it = by_concept_.find(concept_id);
    return it == by_concept_.end() ? nullptr : &it->second;
}

const std::vector<uint64_t>* RdfTypeStore::concepts_of(uint64_t subject_id) const {
    auto it = by_subject_.find(subject_id);
    return it == by_subject_.end() ? nullptr : &it->second;
}

std::vector<uint64_t> RdfTypeStore::subjects_in(const IdInterval& interval) const {
    std::vector<uint64_t> merged;
    for (auto it = by_concept_.lower_bound(interval.lower);
         it != by_concept_.end() && it->first < interval.upper; ++it)
        merged.insert(merged.end(), it->second.begin(), it->second.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

bool RdfTypeStore::subject_typed_in(uint64_t subject_id,
                                    const std::vector<IdInterval>& cover) const {
    const std::vector<uint64_t>* concepts = concepts_of(subject_id);
    if (!concepts) return false;
    for (const IdInterval& iv : cover) {
        auto it = std::lower_bound(concepts->begin(), concepts->end(), iv.lower);
        if (it != concepts->end() && *it < iv.upper) return true;
    }
    return false;
}

void RdfTypeStore::save(std::ostream& out) const {
    bytes::write_varint(out, by_concept_.size());
    for (const auto& [concept_id, subjects] : by_concept_) {
        bytes::write_varint(out, concept_id);
        bytes::write_varint(out, subjects.size());
        uint64_t prev = 0;
        for (uint64_t s : subjects) {
            bytes::write_varint(out, s - prev);
            prev = s;
        }
    }
}

RdfTypeStore RdfTypeStore::load(std::istream& in) {
    std::vector<std::pair<uint64_t, uint64_t>> pairs;
    const uint64_t concepts = bytes::read_varint(in);
    for (uint64_t i = 0; i < concepts; ++i) {
        const uint64_t concept_id = bytes::read_varint(in);
        const uint64_t n = bytes::read_varint(in);
        uint64_t prev = 0;
        for (uint64_t j = 0; j < n; ++j) {
            prev += bytes::read_varint(in);
            pairs.emplace_back(concept_id, prev);
        }
    }
    RdfTypeStore store;
    store.build(std::move(pairs));
    return store;
}

// --------------------------------------------------------------------------
// KnowledgeBase construction

namespace {

struct DatatypeRow {
    uint64_t p = 0, s = 0;
    Term literal;

    auto operator<=>(const DatatypeRow&) const = default;
};

ChainIndex make_chain(const std::vector<uint64_t>& ps, const std::vector<uint64_t>& ss,
                      const std::vector<uint64_t>& slot_entry, unsigned p_width,
                      unsigned s_width) {
    // ps/ss run per subject entry; slot_entry maps each object slot to its entry.
    std::vector<uint64_t> distinct_props;
    std::vector<bool> ps_bits(ps.size());
    for (std::size_t e = 0; e < ps.size(); ++e) {
        const bool first = e == 0 || ps[e] != ps[e - 1];
        ps_bits[e] = first;
        if (first) distinct_props.push_back(ps[e]);
    }
    std::vector<bool> so_bits(slot_entry.size());
    for (std::size_t i = 0; i < slot_entry.size(); ++i)
        so_bits[i] = i == 0 || slot_entry[i] != slot_entry[i - 1];
    return ChainIndex(sds::WaveletTree(distinct_props, p_width), sds::BitMap(ps_bits),
                      sds::WaveletTree(ss, s_width), sds::BitMap(so_bits), slot_entry.size());
}

}  // namespace

KnowledgeBase KnowledgeBase::assemble(Dictionary concepts, Dictionary properties,
                                      Dictionary instances, std::vector<EncodedTriple> triples,
                                      uint64_t pre_dedup_count) {
    std::vector<std::array<uint64_t, 3>> object_rows;
    std::vector<DatatypeRow> datatype_rows;
    std::vector<std::pair<uint64_t, uint64_t>> type_pairs;  // (concept, subject)

    auto require = [](const Dictionary& d, uint64_t id, const char* role) {
        if (!d.contains_id(id))
            throw IntegrityError(std::string("dangling ") + role + " id " + std::to_string(id));
    };

    for (EncodedTriple& t : triples) {
        switch (t.kind) {
            case TripleKind::Object:
                require(properties, t.predicate, "property");
                require(instances, t.subject, "subject");
                require(instances, t.object, "object");
                object_rows.push_back({t.predicate, t.subject, t.object});
                break;
            case TripleKind::Datatype:
                require(properties, t.predicate, "property");
                require(instances, t.subject, "subject");
                datatype_rows.push_back({t.predicate, t.subject, std::move(t.literal)});
                break;
            case TripleKind::RdfType:
                require(concepts, t.object, "concept");
                require(instances, t.subject, "subject");
                type_pairs.emplace_back(t.object, t.subject);
                break;
        }
    }

    std::sort(object_rows.begin(), object_rows.end());
    object_rows.erase(std::unique(object_rows.begin(), object_rows.end()), object_rows.end());
    std::sort(datatype_rows.begin(), datatype_rows.end());
    datatype_rows.erase(std::unique(datatype_rows.begin(), datatype_rows.end()),
                        datatype_rows.end());

    KnowledgeBase kb;
    kb.concepts_ = std::move(concepts);
    kb.properties_ = std::move(properties);
    kb.instances_ = std::move(instances);
    kb.counts_.pre_dedup = pre_dedup_count;
    kb.counts_.object_triples = object_rows.size();
    kb.counts_.datatype_triples = datatype_rows.size();

    const unsigned p_width = kb.properties_.total_bits();
    const unsigned s_width = kb.instances_.total_bits();

    {
        std::vector<uint64_t> ps, ss, slot_entry, objects;
        uint64_t entry = 0;
        for (std::size_t i = 0; i < object_rows.size(); ++i) {
            const auto& [p, s, o] = object_rows[i];
            if (i == 0 || p != object_rows[i - 1][0] || s != object_rows[i - 1][1]) {
                ps.push_back(p);
                ss.push_back(s);
                entry = ps.size() - 1;
            }
            slot_entry.push_back(entry);
            objects.push_back(o);
        }
        kb.object_store_.chain = make_chain(ps, ss, slot_entry, p_width, s_width);
        kb.object_store_.objects = sds::WaveletTree(objects, s_width);
    }
    {
        std::vector<uint64_t> ps, ss, slot_entry;
        uint64_t entry = 0;
        kb.datatype_store_.literal_table.reserve(datatype_rows.size());
        for (std::size_t i = 0; i < datatype_rows.size(); ++i) {
            const DatatypeRow& row = datatype_rows[i];
            if (i == 0 || row.p != datatype_rows[i - 1].p || row.s != datatype_rows[i - 1].s) {
                ps.push_back(row.p);
                ss.push_back(row.s);
                entry = ps.size() - 1;
            }
            slot_entry.push_back(entry);
            kb.datatype_store_.literal_table.push_back(row.literal);
        }
        kb.datatype_store_.chain = make_chain(ps, ss, slot_entry, p_width, s_width);
    }
    kb.type_store_.build(std::move(type_pairs));
    kb.counts_.type_triples = kb.type_store_.size();

    // Occurrence statistics over the deduplicated graph.
    for (const auto& [p, s, o] : object_rows) {
        kb.properties_.add_occurrence(p);
        kb.instances_.add_occurrence(s);
        kb.instances_.add_occurrence(o);
    }
    for (const DatatypeRow& row : datatype_rows) {
        kb.properties_.add_occurrence(row.p);
        kb.instances_.add_occurrence(row.s);
    }
    for (const auto& [concept_id, subjects] : kb.type_store_.by_concept())
        kb.concepts_.set_occurrence(concept_id, subjects.size());
    for (const auto& [subject_id, concepts_list] : kb.type_store_.by_subject())
        kb.instances_.add_occurrence(subject_id, concepts_list.size());
    kb.concepts_.finalize_statistics();
    kb.properties_.finalize_statistics();
    kb.compute_property_stats();
    return kb;
}

KnowledgeBase KnowledgeBase::build(const litemat::OntologyGraph& ontology,
                                   const std::vector<RawTriple>& triples) {
    const uint64_t pre_dedup = triples.size();

    std::vector<RawTriple> all = triples;
    {
        std::vector<RawTriple> derived = litemat::materialize_domain_range(ontology, triples);
        std::move(derived.begin(), derived.end(), std::back_inserter(all));
    }

    // Hierarchy terms seen in the data but absent from the ontology hang off
    // the implicit roots.
    std::vector<std::string> concept_orphans, property_orphans;
    {
        std::set<std::string> concept_set, property_set;
        for (const RawTriple& t : all) {
            if (t.predicate.value == parser::kRdfType) {
                if (t.object.is_literal())
                    throw IntegrityError("rdf:type object must be a resource");
                concept_set.insert(t.object.key());
            } else {
                property_set.insert(t.predicate.value);
            }
        }
        for (const auto& [_, concepts] : ontology.domain_of)
            concept_set.insert(concepts.begin(), concepts.end());
        for (const auto& [_, concepts] : ontology.range_of)
            concept_set.insert(concepts.begin(), concepts.end());
        concept_orphans.assign(concept_set.begin(), concept_set.end());
        property_orphans.assign(property_set.begin(), property_set.end());
    }

    Dictionary concepts =
        Dictionary::encode_hierarchy(ontology.concept_edges, concept_orphans, TermKind::Concept);
    Dictionary properties = Dictionary::encode_hierarchy(ontology.property_edges,
                                                         property_orphans, TermKind::Property);
    Dictionary instances = Dictionary::instances();

    std::vector<EncodedTriple> encoded;
    encoded.reserve(all.size());
    for (const RawTriple& t : all) {
        EncodedTriple e;
        e.subject = instances.add_instance(t.subject.key());
        if (t.predicate.value == parser::kRdfType) {
            e.kind = TripleKind::RdfType;
            e.object = concepts.locate(t.object.key()).id;
        } else if (t.object.is_literal()) {
            e.kind = TripleKind::Datatype;
            e.predicate = properties.locate(t.predicate.value).id;
            e.literal = t.object;
        } else {
            e.kind = TripleKind::Object;
            e.predicate = properties.locate(t.predicate.value).id;
            e.object = instances.add_instance(t.object.key());
        }
        encoded.push_back(std::move(e));
    }
    return assemble(std::move(concepts), std::move(properties), std::move(instances),
                    std::move(encoded), pre_dedup);
}

KnowledgeBase KnowledgeBase::build(const std::vector<RawTriple>& triples) {
    return build(litemat::OntologyGraph{}, triples);
}

void KnowledgeBase::compute_property_stats() {
    auto walk = [](const ChainIndex& chain, auto distinct_objects_of_block) {
        std::unordered_map<uint64_t, PropertyStats> stats;
        for (uint64_t pos = 0; pos < chain.property_count(); ++pos) {
            const uint64_t p = chain.property_at(pos);
            const auto [s_begin, s_end] = chain.subject_range(pos);
            const auto [o_begin, o_end] = chain.block_object_range(s_begin, s_end);
            PropertyStats& ps = stats[p];
            ps.triples = o_end - o_begin;
            ps.distinct_subjects = s_end - s_begin;
            ps.distinct_objects = distinct_objects_of_block(o_begin, o_end);
        }
        return stats;
    };
    object_stats_ = walk(object_store_.chain, [&](uint64_t o_begin, uint64_t o_end) {
        std::vector<uint64_t> objects;
        objects.reserve(o_end - o_begin);
        for (uint64_t i = o_begin; i < o_end; ++i)
            objects.push_back(object_store_.objects.access(i));
        std::sort(objects.begin(), objects.end());
        return static_cast<uint64_t>(
            std::unique(objects.begin(), objects.end()) - objects.begin());
    });
    datatype_stats_ = walk(datatype_store_.chain, [&](uint64_t o_begin, uint64_t o_end) {
        std::vector<const Term*> literals;
        literals.reserve(o_end - o_begin);
        for (uint64_t i = o_begin; i < o_end; ++i)
            literals.push_back(&datatype_store_.literal_table[i]);
        auto less = [](const Term* a, const Term* b) { return *a < *b; };
        std::sort(literals.begin(), literals.end(), less);
        auto eq = [](const Term* a, const Term* b) { return *a == *b; };
        return static_cast<uint64_t>(
            std::unique(literals.begin(), literals.end(), eq) - literals.begin());
    });
}

// --------------------------------------------------------------------------
// Evaluation

uint64_t KnowledgeBase::property_triple_count(uint64_t p) const {
    return object_store_.chain.triple_count(p) + datatype_store_.chain.triple_count(p);
}

std::vector<uint64_t> KnowledgeBase::objects(uint64_t s, uint64_t p) const {
    std::vector<uint64_t> out;
    const ChainIndex& chain = object_store_.chain;
    const uint64_t pos = chain.property_position(p);
    if (pos == npos) return out;
    const auto [s_begin, s_end] = chain.subject_range(pos);
    for (uint64_t entry : chain.find_subject(s_begin, s_end, s)) {
        const auto [o_begin, o_end] = chain.object_range(entry);
        for (uint64_t i = o_begin; i < o_end; ++i)
            out.push_back(object_store_.objects.access(i));
    }
    return out;
}

std::vector<uint64_t> KnowledgeBase::subjects_with_object(uint64_t p, uint64_t o) const {
    std::vector<uint64_t> out;
    const ChainIndex& chain = object_store_.chain;
    const uint64_t pos = chain.property_position(p);
    if (pos == npos) return out;
    const auto [s_begin, s_end] = chain.subject_range(pos);
    const auto [o_begin, o_end] = chain.block_object_range(s_begin, s_end);
    for (uint64_t slot : object_store_.objects.range_search(o_begin, o_end, o))
        out.push_back(chain.subject_at(chain.entry_of_slot(slot)));
    return out;
}

std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> KnowledgeBase::object_pairs(
    const IdInterval& interval) const {
    std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> out;
    const ChainIndex& chain = object_store_.chain;
    for (uint64_t pos = chain.lower_bound_block(interval.lower); pos < chain.property_count();
         ++pos) {
        const uint64_t p = chain.property_at(pos);
        if (p >= interval.upper) break;
        const auto [s_begin, s_end] = chain.subject_range(pos);
        for (uint64_t entry = s_begin; entry < s_end; ++entry) {
            const uint64_t s = chain.subject_at(entry);
            const auto [o_begin, o_end] = chain.object_range(entry);
            for (uint64_t i = o_begin; i < o_end; ++i)
                out.emplace_back(p, s, object_store_.objects.access(i));
        }
    }
    return out;
}

std::vector<uint64_t> KnowledgeBase::literal_slots(uint64_t s, uint64_t p) const {
    std::vector<uint64_t> out;
    const ChainIndex& chain = datatype_store_.chain;
    const uint64_t pos = chain.property_position(p);
    if (pos == npos) return out;
    const auto [s_begin, s_end] = chain.subject_range(pos);
    for (uint64_t entry : chain.find_subject(s_begin, s_end, s)) {
        const auto [o_begin, o_end] = chain.object_range(entry);
        for (uint64_t i = o_begin; i < o_end; ++i) out.push_back(i);
    }
    return out;
}

std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> KnowledgeBase::datatype_pairs(
    const IdInterval& interval) const {
    std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> out;
    const ChainIndex& chain = datatype_store_.chain;
    for (uint64_t pos = chain.lower_bound_block(interval.lower); pos < chain.property_count();
         ++pos) {
        const uint64_t p = chain.property_at(pos);
        if (p >= interval.upper) break;
        const auto [s_begin, s_end] = chain.subject_range(pos);
        for (uint64_t entry = s_begin; entry < s_end; ++entry) {
            const uint64_t s = chain.subject_at(entry);
            const auto [o_begin, o_end] = chain.object_range(entry);
            for (uint64_t i = o_begin; i < o_end; ++i) out.emplace_back(p, s, i);
        }
    }
    return out;
}

const Term& KnowledgeBase::literal_table(uint64_t slot) const {
    if (slot >= datatype_store_.literal_table.size())
        throw IntegrityError("literal slot out of range: " + std::to_string(slot));
    return datatype_store_.literal_table[slot];
}

std::vector<Term> KnowledgeBase::eval_datatype(uint64_t s, uint64_t p) const {
    if (datatype_store_.chain.property_position(p) == npos &&
        object_store_.chain.property_position(p) != npos)
        throw KindError("datatype lookup on an object property");
    std::vector<Term> out;
    for (uint64_t slot : literal_slots(s, p)) out.push_back(literal_table(slot));
    return out;
}

std::vector<uint64_t> KnowledgeBase::typed_subjects(const IdInterval& concepts_iv) const {
    return type_store_.subjects_in(concepts_iv);
}

std::vector<uint64_t> KnowledgeBase::typed_subjects(
    const std::vector<IdInterval>& cover) const {
    if (cover.size() == 1) return type_store_.subjects_in(cover.front());
    std::vector<uint64_t> merged;
    for (const IdInterval& iv : cover) {
        std::vector<uint64_t> part = type_store_.subjects_in(iv);
        merged.insert(merged.end(), part.begin(), part.end());
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

std::vector<uint64_t> KnowledgeBase::types_of(uint64_t subject) const {
    const std::vector<uint64_t>* concepts_list = type_store_.concepts_of(subject);
    return concepts_list ? *concepts_list : std::vector<uint64_t>{};
}

bool KnowledgeBase::subject_typed_in(uint64_t subject,
                                     const std::vector<IdInterval>& cover) const {
    return type_store_.subject_typed_in(subject, cover);
}

Term KnowledgeBase::decode_instance(uint64_t id) const {
    return key_to_term(instances_.extract(id));
}

std::vector<RawTriple> KnowledgeBase::decode_all() const {
    std::vector<RawTriple> out;
    out.reserve(counts_.total());
    for (const auto& [p, s, o] : object_pairs({0, ~uint64_t(0)}))
        out.push_back({decode_instance(s), Term::iri(properties_.extract(p)),
                       decode_instance(o)});
    for (const auto& [p, s, slot] : datatype_pairs({0, ~uint64_t(0)}))
        out.push_back({decode_instance(s), Term::iri(properties_.extract(p)),
                       literal_table(slot)});
    for (const auto& [subject_id, concepts_list] : type_store_.by_subject())
        for (uint64_t concept_id : concepts_list)
            out.push_back({decode_instance(subject_id), Term::iri(parser::kRdfType),
                           key_to_term(concepts_.extract(concept_id))});
    return out;
}

// --------------------------------------------------------------------------
// Container format

namespace {

void save_literal_table(const std::vector<Term>& table, std::ostream& out) {
    bytes::write_varint(out, table.size());
    for (const Term& t : table) {
        uint8_t flags = 0;
        if (!t.datatype.empty()) flags |= 1;
        if (!t.lang.empty()) flags |= 2;
        bytes::write_u8(out, flags);
        bytes::write_varint(out, t.value.size());
        bytes::write_raw(out, t.value.data(), t.value.size());
        if (flags & 1) {
            bytes::write_varint(out, t.datatype.size());
            bytes::write_raw(out, t.datatype.data(), t.datatype.size());
        }
        if (flags & 2) {
            bytes::write_varint(out, t.lang.size());
            bytes::write_raw(out, t.lang.data(), t.lang.size());
        }
    }
}

std::vector<Term> load_literal_table(std::istream& in) {
    const uint64_t n = bytes::read_varint(in);
    std::vector<Term> table;
    table.reserve(n);
    auto read_chunk = [&](std::string& s) {
        s.resize(bytes::read_varint(in));
        if (!s.empty()) bytes::read_raw(in, s.data(), s.size());
    };
    for (uint64_t i = 0; i < n; ++i) {
        Term t;
        t.type = parser::TermType::Literal;
        const uint8_t flags = bytes::read_u8(in);
        read_chunk(t.value);
        if (flags & 1) read_chunk(t.datatype);
        if (flags & 2) read_chunk(t.lang);
        table.push_back(std::move(t));
    }
    return table;
}

}  // namespace

SerializedSizes KnowledgeBase::save(std::ostream& out) const {
    std::ostringstream dict_buf(std::ios::binary), data_buf(std::ios::binary);
    concepts_.save(dict_buf);
    properties_.save(dict_buf);
    instances_.save(dict_buf);

    object_store_.chain.save(data_buf);
    sds::save(object_store_.objects, data_buf);
    datatype_store_.chain.save(data_buf);
    save_literal_table(datatype_store_.literal_table, data_buf);
    type_store_.save(data_buf);

    const std::string dict = dict_buf.str(), data = data_buf.str();
    sds::write_header(out, sds::StructureTag::ContainerTag);
    bytes::write_u64(out, counts_.pre_dedup);
    bytes::write_u64(out, counts_.object_triples);
    bytes::write_u64(out, counts_.datatype_triples);
    bytes::write_u64(out, counts_.type_triples);
    bytes::write_u64(out, dict.size());
    bytes::write_u64(out, data.size());
    bytes::write_raw(out, dict.data(), dict.size());
    bytes::write_raw(out, data.data(), data.size());

    SerializedSizes sizes;
    sizes.header_bytes = 4 + 1 + 6 * 8;
    sizes.dictionary_bytes = dict.size();
    sizes.data_bytes = data.size();
    return sizes;
}

KnowledgeBase KnowledgeBase::load(std::istream& in) {
    sds::expect_tag(in, sds::StructureTag::ContainerTag);
    KnowledgeBase kb;
    kb.counts_.pre_dedup = bytes::read_u64(in);
    kb.counts_.object_triples = bytes::read_u64(in);
    kb.counts_.datatype_triples = bytes::read_u64(in);
    kb.counts_.type_triples = bytes::read_u64(in);
    bytes::read_u64(in);  // dictionary section size
    bytes::read_u64(in);  // data section size

    kb.concepts_ = Dictionary::load(in);
    kb.properties_ = Dictionary::load(in);
    kb.instances_ = Dictionary::load(in);

    kb.object_store_.chain = ChainIndex::load(in);
    kb.object_store_.objects = sds::load_wavelet_tree(in);
    kb.datatype_store_.chain = ChainIndex::load(in);
    kb.datatype_store_.literal_table = load_literal_table(in);
    kb.type_store_ = RdfTypeStore::load(in);

    if (kb.object_store_.objects.size() != kb.counts_.object_triples ||
        kb.datatype_store_.literal_table.size() != kb.counts_.datatype_triples ||
        kb.type_store_.size() != kb.counts_.type_triples)
        throw FormatError("container counts do not match section contents");

    kb.compute_property_stats();
    return kb;
}

const PropertyStats* KnowledgeBase::object_property_stats(uint64_t p) const {
    auto it = object_stats_.find(p);
    return it == object_stats_.end() ? nullptr : &it->second;
}

const PropertyStats* KnowledgeBase::datatype_property_stats(uint64_t p) const {
    auto it = datatype_stats_.find(p);
    return it == datatype_stats_.end() ? nullptr : &it->second;
}

Term key_to_term(const std::string& key) {
    if (key.size() >= 2 && key[0] == '_' && key[1] == ':') return Term::blank(key.substr(2));
    return Term::iri(key);
}

}  // namespace skg::store
